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

// Sub-MILP neighborhoods around one (RENS) or several (MRENS) fractional
// reference solutions.
//
// RENS restricts each integer variable to [floor(x_j), ceil(x_j)] of a single
// reference. MRENS takes the per-variable minimum and maximum over all
// references: a spread of at least one rounds inward to [ceil(min), floor(max)],
// a smaller spread rounds outward to [floor(min), ceil(max)]. Reference values
// within the integrality tolerance of an integer are snapped first.

#ifndef MRENS_NEIGHBORHOOD_H_
#define MRENS_NEIGHBORHOOD_H_

#include <span>
#include <vector>

#include "mrens/model.h"

namespace mrens {

enum class NeighborhoodMode { kRens, kMrens };

const char* to_string(NeighborhoodMode mode);

struct NeighborhoodBounds {
  NeighborhoodMode mode = NeighborhoodMode::kRens;
  // Indexed like model.integer_vars(); entries are integral.
  std::vector<double> var_lower;
  std::vector<double> var_upper;
  int fixed_count = 0;
};

NeighborhoodBounds rens_bounds(const MilpModel& model,
                               std::span<const double> reference);

NeighborhoodBounds mrens_bounds(const MilpModel& model,
                                std::span<const std::vector<double>> references);

// The single-variable rule behind mrens_bounds, before intersecting with the
// model bounds. Returns {lower, upper}.
std::pair<double, double> mrens_interval(std::span<const double> values);

// fixed_count / |I|, or 1 when the model has no integer variables.
double fixing_rate(const NeighborhoodBounds& bounds, const MilpModel& model);

MilpModel build_submilp(const MilpModel& model, const NeighborhoodBounds& bounds);

// Inclusive: rate >= min_int_fixing.
bool execution_gate(const NeighborhoodBounds& bounds, const MilpModel& model,
                    double min_int_fixing = 0.5);

}  // namespace mrens

#endif  // MRENS_NEIGHBORHOOD_H_
