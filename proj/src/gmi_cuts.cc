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

#include "mrens/gmi_cuts.h"

#include <algorithm>
#include <cmath>
#include <optional>

namespace mrens {

namespace {

bool near_integer(double value, double tol) {
  return std::abs(value - std::round(value)) <= tol;
}

// A row logical s_i = a_i'x is integral on every MILP point when the row only
// touches integer variables with integral coefficients; its shift from an
// integral rhs is then integral as well.
std::vector<char> integral_logicals(const MilpModel& model) {
  std::vector<char> integral(model.num_rows(), 0);
  for (int i = 0; i < model.num_rows(); ++i) {
    const Row& row = model.row(i);
    bool ok = near_integer(row.rhs, 1e-12);
    for (const SparseEntry& e : row.entries) {
      ok = ok && model.is_integer(e.index) && near_integer(e.value, 1e-12);
    }
    integral[i] = ok;
  }
  return integral;
}

// Maps one tableau row to a GMI cut over the structural variables. Returns
// nothing when the row cannot yield a valid cut.
std::optional<GmiCut> cut_from_row(const MilpModel& model,
                                   const LpSolution& solution,
                                   const TableauRow& row,
                                   const std::vector<char>& integral_logical,
                                   const GmiOptions& options) {
  const int n = model.num_vars();
  const double f0 = row.rhs - std::floor(row.rhs);

  // Shift-space cut sum pi_j * shift_j >= 1, expanded into (x, s) space.
  std::vector<double> dense(n, 0.0);
  double rhs = 1.0;
  for (std::size_t k = 0; k < row.nonbasic_vars.size(); ++k) {
    const int j = row.nonbasic_vars[k];
    const double a = row.coefficients[k];
    const VarStatus status = solution.basis.status[j];
    if (status == VarStatus::kFree) return std::nullopt;
    const double value = solution.x[j];
    const bool integer_shift =
        (j < n ? model.is_integer(j) : integral_logical[j - n] != 0) &&
        near_integer(value, 1e-9);
    double pi = 0.0;
    if (integer_shift) {
      double fj = a - std::floor(a);
      if (fj < 1e-12 || fj > 1.0 - 1e-12) fj = 0.0;
      pi = fj <= f0 ? fj / f0 : (1.0 - fj) / (1.0 - f0);
    } else {
      pi = a >= 0.0 ? a / f0 : -a / (1.0 - f0);
    }
    if (pi == 0.0) continue;
    // shift = x_j - v_j at a lower bound, v_j - x_j at an upper bound.
    const double sign = status == VarStatus::kAtUpper ? -1.0 : 1.0;
    const double coefficient = sign * pi;
    rhs += coefficient * value;
    if (j < n) {
      dense[j] += coefficient;
    } else {
      for (const SparseEntry& e : model.row(j - n).entries) {
        dense[e.index] += coefficient * e.value;
      }
    }
  }

  GmiCut cut;
  cut.source_var = row.basic_var;
  for (int j = 0; j < n; ++j) {
    const double g = dense[j];
    if (g == 0.0) continue;
    if (std::abs(g) < options.zero_tolerance) {
      // Dropping a term is only safe if the bound it is relaxed against exists.
      const double bound = g > 0.0 ? model.upper()[j] : model.lower()[j];
      if (std::isfinite(bound)) {
        rhs -= g * bound;
        continue;
      }
    }
    cut.coefficients.push_back({j, g});
  }
  if (cut.coefficients.empty()) return std::nullopt;
  double largest = 0.0;
  double smallest = kInfinity;
  for (const SparseEntry& e : cut.coefficients) {
    largest = std::max(largest, std::abs(e.value));
    smallest = std::min(smallest, std::abs(e.value));
  }
  if (largest > options.max_dynamism * smallest) return std::nullopt;
  cut.rhs = rhs;
  cut.violation_at_source = cut_violation(cut, solution.x);
  if (cut.violation_at_source < options.min_violation) return std::nullopt;
  return cut;
}

}  // namespace

std::vector<GmiCut> generate_gmi_round(const MilpModel& model,
                                       const LpSolution& solution,
                                       const GmiOptions& options) {
  if (solution.status != LpStatus::kOptimal) {
    throw ContractViolation("GMI separation requires an optimal LP solution");
  }
  const int n = model.num_vars();
  const int m = model.num_rows();

  struct Candidate {
    double away;
    int row;
  };
  std::vector<Candidate> candidates;
  for (int r = 0; r < m; ++r) {
    const int v = solution.basis.basic_order[r];
    if (v >= n || !model.is_integer(v)) continue;
    const double f0 = solution.x[v] - std::floor(solution.x[v]);
    const double away = std::min(f0, 1.0 - f0);
    if (away > options.min_fractionality) candidates.push_back({away, r});
  }
  std::vector<GmiCut> cuts;
  if (candidates.empty()) return cuts;
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.away > b.away;
                   });

  const auto inverse = BasisInverse::factorize(model, solution.basis);
  if (!inverse) return cuts;
  const std::vector<char> integral_logical = integral_logicals(model);
  for (const Candidate& c : candidates) {
    if (static_cast<int>(cuts.size()) >= options.max_cuts) break;
    const TableauRow row = tableau_row(model, solution, *inverse, c.row);
    if (auto cut = cut_from_row(model, solution, row, integral_logical, options)) {
      cuts.push_back(std::move(*cut));
    }
  }
  return cuts;
}

double cut_violation(const GmiCut& cut, std::span<const double> x) {
  double activity = 0.0;
  for (const SparseEntry& e : cut.coefficients) {
    if (e.index < 0 || static_cast<std::size_t>(e.index) >= x.size()) {
      throw ContractViolation("cut references a variable outside the point");
    }
    activity += e.value * x[e.index];
  }
  return cut.rhs - activity;
}

}  // namespace mrens
