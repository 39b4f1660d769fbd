// Copyright 2026 The mrens Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrens/model.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

namespace mrens {

MilpModel::MilpModel(std::vector<double> objective, std::vector<Row> rows,
                     std::vector<double> lower, std::vector<double> upper,
                     std::vector<int> integer_vars,
                     std::vector<std::string> var_names,
                     double objective_offset, std::string name)
    : name_(std::move(name)),
      objective_(std::move(objective)),
      objective_offset_(objective_offset),
      rows_(std::move(rows)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      integer_vars_(std::move(integer_vars)),
      var_names_(std::move(var_names)) {
  canonicalize();
}

void MilpModel::canonicalize() {
  const int n = num_vars();
  if (static_cast<int>(lower_.size()) != n ||
      static_cast<int>(upper_.size()) != n) {
    throw InvalidModel("bound vectors do not match the number of variables");
  }
  if (var_names_.empty()) {
    var_names_.reserve(n);
    for (int j = 0; j < n; ++j) var_names_.push_back(fmt::format("x{}", j));
  } else if (static_cast<int>(var_names_.size()) != n) {
    throw InvalidModel("variable name count does not match");
  }

  std::sort(integer_vars_.begin(), integer_vars_.end());
  integer_vars_.erase(std::unique(integer_vars_.begin(), integer_vars_.end()),
                      integer_vars_.end());
  is_integer_.assign(n, 0);
  for (int j : integer_vars_) {
    if (j < 0 || j >= n) throw InvalidModel("integer index out of range");
    is_integer_[j] = 1;
  }

  for (int j = 0; j < n; ++j) {
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) ||
        std::isnan(objective_[j]) || !std::isfinite(objective_[j])) {
      throw InvalidModel(fmt::format("non-finite data on variable {}", j));
    }
    if (lower_[j] > upper_[j]) {
      throw InvalidModel(fmt::format("variable {} has lower bound {} above "
                                     "upper bound {}",
                                     var_names_[j], lower_[j], upper_[j]));
    }
    if (is_integer_[j]) {
      if (std::isfinite(lower_[j]))
        lower_[j] = std::ceil(lower_[j] - kIntegralityTolerance);
      if (std::isfinite(upper_[j]))
        upper_[j] = std::floor(upper_[j] + kIntegralityTolerance);
      if (lower_[j] > upper_[j]) {
        throw InvalidModel(fmt::format(
            "integer variable {} has no integral value in its bounds",
            var_names_[j]));
      }
    }
  }

  columns_.assign(n, {});
  for (int i = 0; i < num_rows(); ++i) {
    Row& row = rows_[i];
    if (row.name.empty()) row.name = fmt::format("r{}", i);
    if (!std::isfinite(row.rhs)) {
      throw InvalidModel(fmt::format("row {} has a non-finite rhs", row.name));
    }
    std::sort(row.entries.begin(), row.entries.end(),
              [](const SparseEntry& a, const SparseEntry& b) {
                return a.index < b.index;
              });
    SparseVector merged;
    merged.reserve(row.entries.size());
    for (const SparseEntry& e : row.entries) {
      if (e.index < 0 || e.index >= n) {
        throw InvalidModel(fmt::format("row {} references column {}",
                                       row.name, e.index));
      }
      if (!std::isfinite(e.value)) {
        throw InvalidModel(fmt::format("row {} has a non-finite coefficient",
                                       row.name));
      }
      if (!merged.empty() && merged.back().index == e.index) {
        merged.back().value += e.value;
      } else {
        merged.push_back(e);
      }
    }
    std::erase_if(merged, [](const SparseEntry& e) { return e.value == 0.0; });
    row.entries = std::move(merged);
    for (const SparseEntry& e : row.entries) {
      columns_[e.index].push_back({i, e.value});
    }
  }
}

MilpModel MilpModel::with_bounds(std::vector<double> lower,
                                 std::vector<double> upper) const {
  MilpModel copy = *this;
  copy.lower_ = std::move(lower);
  copy.upper_ = std::move(upper);
  copy.canonicalize();
  return copy;
}

MilpModel MilpModel::with_objective(std::vector<double> objective) const {
  if (static_cast<int>(objective.size()) != num_vars()) {
    throw ContractViolation("objective length mismatch");
  }
  MilpModel copy = *this;
  copy.objective_ = std::move(objective);
  return copy;
}

MilpModel MilpModel::with_integer_vars(std::vector<int> integer_vars) const {
  MilpModel copy = *this;
  copy.integer_vars_ = std::move(integer_vars);
  copy.canonicalize();
  return copy;
}

double MilpModel::evaluate_objective(std::span<const double> x) const {
  double value = 0.0;
  for (int j = 0; j < num_vars(); ++j) value += objective_[j] * x[j];
  return value;
}

double MilpModel::row_activity(int i, std::span<const double> x) const {
  double activity = 0.0;
  for (const SparseEntry& e : rows_[i].entries) activity += e.value * x[e.index];
  return activity;
}

int ModelBuilder::add_variable(double lower, double upper, double objective,
                               bool integer, std::string name) {
  const int j = static_cast<int>(objective_.size());
  objective_.push_back(objective);
  lower_.push_back(lower);
  upper_.push_back(upper);
  if (integer) integer_vars_.push_back(j);
  var_names_.push_back(name.empty() ? fmt::format("x{}", j) : std::move(name));
  return j;
}

void ModelBuilder::add_row(SparseVector entries, RowSense sense, double rhs,
                           std::string name) {
  if (name.empty()) name = fmt::format("r{}", rows_.size());
  switch (sense) {
    case RowSense::kGreaterEqual:
      rows_.push_back({std::move(entries), rhs, std::move(name)});
      break;
    case RowSense::kLessEqual:
      for (SparseEntry& e : entries) e.value = -e.value;
      rows_.push_back({std::move(entries), -rhs, std::move(name)});
      break;
    case RowSense::kEqual:
      add_ranged_row(entries, rhs, rhs, name);
      break;
  }
}

void ModelBuilder::add_ranged_row(const SparseVector& entries, double lo,
                                  double hi, const std::string& name) {
  const std::string base = name.empty() ? fmt::format("r{}", rows_.size()) : name;
  const bool both = std::isfinite(lo) && std::isfinite(hi);
  if (std::isfinite(lo)) {
    rows_.push_back({entries, lo, both ? base + "_lo" : base});
  }
  if (std::isfinite(hi)) {
    SparseVector negated = entries;
    for (SparseEntry& e : negated) e.value = -e.value;
    rows_.push_back({std::move(negated), -hi, both ? base + "_up" : base});
  }
}

MilpModel ModelBuilder::build() const {
  return MilpModel(objective_, rows_, lower_, upper_, integer_vars_, var_names_,
                   objective_offset_, name_);
}

Solution make_solution(const MilpModel& model, std::span<const double> x) {
  const int n = model.num_vars();
  if (static_cast<int>(x.size()) < n) {
    throw ContractViolation("solution vector shorter than the model");
  }
  Solution solution;
  solution.values.assign(x.begin(), x.begin() + n);
  solution.objective_value = model.evaluate_objective(solution.values);
  solution.kind = is_integral(solution.values, model.integer_vars())
                      ? SolutionKind::kIntegral
                      : SolutionKind::kFractional;
  return solution;
}

MilpModel lp_relaxation(const MilpModel& model) {
  return model.with_integer_vars({});
}

bool is_integral(std::span<const double> x, std::span<const int> integer_set,
                 double tol) {
  return std::all_of(integer_set.begin(), integer_set.end(), [&](int j) {
    return std::abs(x[j] - std::round(x[j])) <= tol;
  });
}

double max_violation(const MilpModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.num_vars()) {
    throw ContractViolation(fmt::format("point has dimension {}, model has {}",
                                        x.size(), model.num_vars()));
  }
  double worst = 0.0;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (std::isnan(x[j])) return kInfinity;
    worst = std::max({worst, model.lower()[j] - x[j], x[j] - model.upper()[j]});
  }
  for (int i = 0; i < model.num_rows(); ++i) {
    worst = std::max(worst, model.row(i).rhs - model.row_activity(i, x));
  }
  return worst;
}

bool check_feasible(const MilpModel& model, std::span<const double> x,
                    double tol) {
  return max_violation(model, x) <= tol && is_integral(x, model.integer_vars());
}

}  // namespace mrens
