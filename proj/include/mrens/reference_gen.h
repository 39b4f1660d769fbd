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

// Relax-and-cut over GMI cuts. Cuts are never added as LP rows; they are
// priced into the objective with nonnegative multipliers, so every LP optimum
// along the way lies in the original LP relaxation and can serve as a
// reference solution for neighborhood construction.

#ifndef MRENS_REFERENCE_GEN_H_
#define MRENS_REFERENCE_GEN_H_

#include <span>
#include <vector>

#include "mrens/gmi_cuts.h"
#include "mrens/lp_simplex.h"
#include "mrens/model.h"

namespace mrens {

struct LagrangianState {
  std::vector<GmiCut> cut_pool;
  std::vector<double> multipliers;
  double best_dual_value = -kInfinity;
  double incumbent_primal_value = kInfinity;
  double step_parameter = 1.0;
  // Dual value at the most recent update.
  double last_dual_value = -kInfinity;
  int iteration = 0;
  int non_improving = 0;
};

struct LagrangianObjective {
  std::vector<double> linear;
  // sum_i lambda_i * rhs_i; excluded from the LP and added back for reporting.
  double constant = 0.0;
};

// c - sum_i lambda_i * gamma_i.
LagrangianObjective lagrangian_objective(std::span<const double> objective,
                                         std::span<const GmiCut> cuts,
                                         std::span<const double> multipliers);

// Records L(lambda) at `x` (an optimum of the current Lagrangian LP), then
// takes a projected subgradient step. Polyak steps are used once a primal
// bound is known; otherwise t = mu / (iteration + 1). mu halves after three
// consecutive updates without a better dual value.
LagrangianState update_multipliers(std::span<const double> objective,
                                   LagrangianState state,
                                   std::span<const double> x);

enum class RefGenStatus { kOk, kLpInfeasible, kLpUnbounded, kLpFailed };

const char* to_string(RefGenStatus status);

struct RefGenConfig {
  int max_iterations = 20;
  int cuts_per_round = 10;
  double initial_step = 1.0;
  // Known primal bound; enables Polyak steps from the first update.
  double primal_bound = kInfinity;
  LpOptions lp;
};

struct ReferenceSet {
  RefGenStatus status = RefGenStatus::kOk;
  // x^0, x^1, ..., x^k in generation order; consecutive duplicates dropped.
  std::vector<Solution> all_solutions;
  // x^0 plus the last two, deduplicated; at most three entries.
  std::vector<Solution> selected;
  std::vector<Solution> integral_found;
  // L(lambda) for every Lagrangian LP solved, x^0 included.
  std::vector<double> dual_values;
  int iterations = 0;
  int cuts_generated = 0;
  int lp_iterations = 0;
};

// First, second to last and last solution, with value duplicates removed.
std::vector<Solution> select_references(std::span<const Solution> solutions);

ReferenceSet run_relax_and_cut(const MilpModel& model,
                               const RefGenConfig& config = {});

}  // namespace mrens

#endif  // MRENS_REFERENCE_GEN_H_
