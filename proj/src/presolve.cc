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

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrens/subsolver.h"

namespace mrens {

namespace {

// Continuous bounds move only by a noticeable step; integer bounds always
// move to the next integer.
constexpr double kContinuousStep = 1e-3;

struct Activity {
  double finite = 0.0;
  int infinite = 0;
};

// Maximum activity of a row: each term at the bound that maximizes it.
Activity max_activity(const Row& row, std::span<const double> lo,
                      std::span<const double> up) {
  Activity act;
  for (const SparseEntry& e : row.entries) {
    const double bound = e.value > 0 ? up[e.index] : lo[e.index];
    if (std::isinf(bound)) {
      ++act.infinite;
    } else {
      act.finite += e.value * bound;
    }
  }
  return act;
}

Activity min_activity(const Row& row, std::span<const double> lo,
                      std::span<const double> up) {
  Activity act;
  for (const SparseEntry& e : row.entries) {
    const double bound = e.value > 0 ? lo[e.index] : up[e.index];
    if (std::isinf(bound)) {
      ++act.infinite;
    } else {
      act.finite += e.value * bound;
    }
  }
  return act;
}

class Propagator {
 public:
  explicit Propagator(const MilpModel& model)
      : model_(model), lo_(model.lower()), up_(model.upper()) {}

  // One sweep over all rows. Returns whether any bound moved.
  bool sweep() {
    bool changed = false;
    for (const Row& row : model_.rows()) {
      const Activity act = max_activity(row, lo_, up_);
      if (act.infinite == 0 && act.finite < row.rhs - kFeasibilityTolerance) {
        infeasible_ = true;
        return false;
      }
      if (act.infinite > 1) continue;
      for (const SparseEntry& e : row.entries) {
        const double own = e.value > 0 ? up_[e.index] : lo_[e.index];
        double rest = act.finite;
        if (std::isinf(own)) {
          rest = act.finite;
        } else if (act.infinite == 0) {
          rest -= e.value * own;
        } else {
          continue;
        }
        // e.value * x_j >= rhs - rest.
        const double bound = (row.rhs - rest) / e.value;
        changed |= e.value > 0 ? tighten_lower(e.index, bound)
                               : tighten_upper(e.index, bound);
        if (infeasible_) return false;
      }
    }
    return changed;
  }

  bool infeasible() const { return infeasible_; }
  const std::vector<double>& lower() const { return lo_; }
  const std::vector<double>& upper() const { return up_; }

 private:
  bool tighten_lower(int j, double bound) {
    if (model_.is_integer(j)) bound = std::ceil(bound - kIntegralityTolerance);
    if (bound <= lo_[j]) return false;
    if (!model_.is_integer(j) && !std::isinf(lo_[j]) &&
        bound - lo_[j] < kContinuousStep * std::max(1.0, std::abs(lo_[j]))) {
      if (bound <= up_[j]) return false;
    }
    return set_bounds(j, bound, up_[j]);
  }

  bool tighten_upper(int j, double bound) {
    if (model_.is_integer(j)) bound = std::floor(bound + kIntegralityTolerance);
    if (bound >= up_[j]) return false;
    if (!model_.is_integer(j) && !std::isinf(up_[j]) &&
        up_[j] - bound < kContinuousStep * std::max(1.0, std::abs(up_[j]))) {
      if (bound >= lo_[j]) return false;
    }
    return set_bounds(j, lo_[j], bound);
  }

  bool set_bounds(int j, double lo, double up) {
    if (lo > up + kFeasibilityTolerance) {
      infeasible_ = true;
      return false;
    }
    // Crossing within tolerance collapses onto the old bound.
    if (lo > up) {
      if (lo == lo_[j]) {
        up = lo;
      } else {
        lo = up;
      }
    }
    lo_[j] = lo;
    up_[j] = up;
    return true;
  }

  const MilpModel& model_;
  std::vector<double> lo_;
  std::vector<double> up_;
  bool infeasible_ = false;
};

}  // namespace

std::vector<double> PresolveResult::lift(std::span<const double> reduced_x) const {
  if (reduced_x.size() < original_index.size()) {
    throw ContractViolation("reduced point is shorter than the reduced model");
  }
  std::vector<double> x = fixed_value;
  for (std::size_t k = 0; k < original_index.size(); ++k) {
    x[original_index[k]] = reduced_x[k];
  }
  return x;
}

PresolveResult presolve(const MilpModel& model, int max_passes) {
  const int n = model.num_vars();
  PresolveResult result;
  Propagator propagator(model);
  while (result.passes < max_passes) {
    ++result.passes;
    if (!propagator.sweep()) break;
  }
  if (propagator.infeasible()) {
    result.infeasible = true;
    result.reduced = model;
    result.fixed_value.assign(n, std::numeric_limits<double>::quiet_NaN());
    for (int j = 0; j < n; ++j) result.original_index.push_back(j);
    return result;
  }

  const auto& lo = propagator.lower();
  const auto& up = propagator.upper();
  result.fixed_value.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<int> reduced_index(n, -1);
  std::vector<double> objective, lower, upper;
  std::vector<std::string> names;
  std::vector<int> integers;
  double offset = model.objective_offset();
  int fixed = 0;
  for (int j = 0; j < n; ++j) {
    if (lo[j] == up[j]) {
      result.fixed_value[j] = lo[j];
      offset += model.objective()[j] * lo[j];
      ++fixed;
      continue;
    }
    reduced_index[j] = static_cast<int>(result.original_index.size());
    result.original_index.push_back(j);
    objective.push_back(model.objective()[j]);
    lower.push_back(lo[j]);
    upper.push_back(up[j]);
    if (!model.var_names().empty()) names.push_back(model.var_names()[j]);
    if (model.is_integer(j)) integers.push_back(reduced_index[j]);
  }
  result.fixed_fraction_total = n == 0 ? 1.0 : static_cast<double>(fixed) / n;

  std::vector<Row> rows;
  for (const Row& row : model.rows()) {
    const Activity act = min_activity(row, lo, up);
    // Redundant: satisfied by every point of the box.
    if (act.infinite == 0 && act.finite >= row.rhs - kObjectiveTolerance) continue;
    Row reduced{{}, row.rhs, row.name};
    for (const SparseEntry& e : row.entries) {
      if (reduced_index[e.index] < 0) {
        reduced.rhs -= e.value * result.fixed_value[e.index];
      } else {
        reduced.entries.push_back({reduced_index[e.index], e.value});
      }
    }
    if (reduced.entries.empty()) {
      if (reduced.rhs > kFeasibilityTolerance) result.infeasible = true;
      continue;
    }
    rows.push_back(std::move(reduced));
  }
  result.reduced = MilpModel(std::move(objective), std::move(rows), std::move(lower),
                             std::move(upper), std::move(integers), std::move(names),
                             offset, model.name());
  return result;
}

}  // namespace mrens
