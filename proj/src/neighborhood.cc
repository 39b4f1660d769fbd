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

#include "mrens/neighborhood.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace mrens {

namespace {

constexpr std::size_t kMaxReferences = 3;

double snap(double value) {
  const double nearest = std::round(value);
  return std::abs(value - nearest) <= kIntegralityTolerance ? nearest : value;
}

void require_reference(const MilpModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.num_vars()) {
    throw ContractViolation(fmt::format("reference has dimension {}, model has {}",
                                        x.size(), model.num_vars()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw ContractViolation("reference has non-finite entries");
  }
  if (max_violation(model, x) > kFeasibilityTolerance) {
    throw ContractViolation("reference is not feasible for the LP relaxation");
  }
}

// Intersects the per-variable intervals with the model bounds and counts
// fixings.
void finalize(const MilpModel& model, NeighborhoodBounds& bounds) {
  bounds.fixed_count = 0;
  const auto& integers = model.integer_vars();
  for (std::size_t k = 0; k < integers.size(); ++k) {
    const int j = integers[k];
    bounds.var_lower[k] = std::max(bounds.var_lower[k], model.lower()[j]);
    bounds.var_upper[k] = std::min(bounds.var_upper[k], model.upper()[j]);
    bounds.fixed_count += bounds.var_lower[k] == bounds.var_upper[k];
  }
}

}  // namespace

const char* to_string(NeighborhoodMode mode) {
  return mode == NeighborhoodMode::kRens ? "rens" : "mrens";
}

NeighborhoodBounds rens_bounds(const MilpModel& model,
                               std::span<const double> reference) {
  require_reference(model, reference);
  NeighborhoodBounds bounds;
  bounds.mode = NeighborhoodMode::kRens;
  for (int j : model.integer_vars()) {
    const double v = snap(reference[j]);
    bounds.var_lower.push_back(std::floor(v));
    bounds.var_upper.push_back(std::ceil(v));
  }
  finalize(model, bounds);
  return bounds;
}

std::pair<double, double> mrens_interval(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("no reference values");
  double lo = kInfinity;
  double hi = -kInfinity;
  for (double v : values) {
    if (!std::isfinite(v)) throw ContractViolation("reference value is not finite");
    lo = std::min(lo, snap(v));
    hi = std::max(hi, snap(v));
  }
  if (hi - lo >= 1.0) return {std::ceil(lo), std::floor(hi)};
  return {std::floor(lo), std::ceil(hi)};
}

NeighborhoodBounds mrens_bounds(const MilpModel& model,
                                std::span<const std::vector<double>> references) {
  if (references.empty()) throw ContractViolation("MRENS needs at least one reference");
  if (references.size() > kMaxReferences) {
    throw ContractViolation("MRENS takes at most three references");
  }
  for (const auto& x : references) require_reference(model, x);
  NeighborhoodBounds bounds;
  bounds.mode = NeighborhoodMode::kMrens;
  std::vector<double> values(references.size());
  for (int j : model.integer_vars()) {
    for (std::size_t i = 0; i < references.size(); ++i) values[i] = references[i][j];
    const auto [lo, hi] = mrens_interval(values);
    bounds.var_lower.push_back(lo);
    bounds.var_upper.push_back(hi);
  }
  finalize(model, bounds);
  return bounds;
}

double fixing_rate(const NeighborhoodBounds& bounds, const MilpModel& model) {
  if (model.num_integer() == 0) return 1.0;
  return static_cast<double>(bounds.fixed_count) / model.num_integer();
}

MilpModel build_submilp(const MilpModel& model, const NeighborhoodBounds& bounds) {
  const auto& integers = model.integer_vars();
  if (bounds.var_lower.size() != integers.size() ||
      bounds.var_upper.size() != integers.size()) {
    throw ContractViolation("neighborhood does not match the model's integer set");
  }
  std::vector<double> lower = model.lower();
  std::vector<double> upper = model.upper();
  for (std::size_t k = 0; k < integers.size(); ++k) {
    lower[integers[k]] = bounds.var_lower[k];
    upper[integers[k]] = bounds.var_upper[k];
  }
  return model.with_bounds(std::move(lower), std::move(upper));
}

bool execution_gate(const NeighborhoodBounds& bounds, const MilpModel& model,
                    double min_int_fixing) {
  return fixing_rate(bounds, model) >= min_int_fixing;
}

}  // namespace mrens
