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

#ifndef MRENS_GMI_CUTS_H_
#define MRENS_GMI_CUTS_H_

#include <span>
#include <vector>

#include "mrens/lp_simplex.h"
#include "mrens/model.h"

namespace mrens {

// coefficients . x >= rhs over structural variables.
struct GmiCut {
  SparseVector coefficients;
  double rhs = 0.0;
  int source_var = -1;
  double violation_at_source = 0.0;
};

struct GmiOptions {
  int max_cuts = 10;
  // Rows qualify when min(f0, 1 - f0) exceeds this.
  double min_fractionality = 1e-4;
  double min_violation = 1e-6;
  double zero_tolerance = 1e-10;
  double max_dynamism = 1e8;
};

// One round of Gomory mixed-integer cuts read off the optimal tableau of
// `solution`. Rows are ranked by min(f0, 1 - f0), ties by lower row index.
std::vector<GmiCut> generate_gmi_round(const MilpModel& model,
                                       const LpSolution& solution,
                                       const GmiOptions& options = {});

// rhs - coefficients . x; positive when x violates the cut.
double cut_violation(const GmiCut& cut, std::span<const double> x);

}  // namespace mrens

#endif  // MRENS_GMI_CUTS_H_
