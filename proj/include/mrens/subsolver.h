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

// Sub-MILP solving: bound-propagation presolve, a best-bound branch-and-bound
// with node and stalling limits, and the complete heuristic call that ties
// neighborhood construction, the fixing gates and the search together.

#ifndef MRENS_SUBSOLVER_H_
#define MRENS_SUBSOLVER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrens/lp_simplex.h"
#include "mrens/model.h"
#include "mrens/neighborhood.h"
#include "mrens/reference_gen.h"

namespace mrens {

struct WorkingLimits {
  std::int64_t node_limit = 5000;
  // Nodes processed since the last strict incumbent improvement. The count
  // starts with the first incumbent.
  std::int64_t stalling_node_limit = 500;
  double min_total_fixing_after_presolve = 0.25;
  // Wall-clock seconds. Results under a time limit are not reproducible.
  std::optional<double> time_limit;
  LpOptions lp;

  // Throws ContractViolation on non-positive counts or fractions outside [0, 1].
  void validate() const;
  static WorkingLimits unlimited();
};

struct PresolveResult {
  MilpModel reduced;
  bool infeasible = false;
  // Variables with l_j = u_j after presolve (including those fixed on input),
  // relative to the original n; 1 for a model without variables.
  double fixed_fraction_total = 0.0;
  int passes = 0;
  // reduced variable k is original variable original_index[k].
  std::vector<int> original_index;
  // Per original variable: the fixed value, or NaN when the variable is kept.
  std::vector<double> fixed_value;

  // Original-space point from a point of the reduced model.
  std::vector<double> lift(std::span<const double> reduced_x) const;
};

PresolveResult presolve(const MilpModel& model, int max_passes = 10);

enum class SubsolveStatus {
  kOptimal,
  kFeasibleLimitHit,
  kInfeasible,
  kAbortedFixingGate,
  // A limit stopped the search before any solution was found.
  kLimitNoSolution,
  kUnbounded,
};

const char* to_string(SubsolveStatus status);

struct SubsolveResult {
  SubsolveStatus status = SubsolveStatus::kInfeasible;
  std::optional<Solution> best_solution;
  std::int64_t nodes_processed = 0;
  std::int64_t stall_nodes_at_end = 0;
  // nodes_processed at each strict incumbent improvement.
  std::vector<std::int64_t> improvement_nodes;
  std::int64_t lp_iterations = 0;
  // Lowest bound among open nodes at termination; the incumbent value when
  // the search completed.
  double dual_bound = -kInfinity;
};

// Solutions must beat incumbent_cutoff by more than kObjectiveTolerance.
SubsolveResult branch_and_bound(const MilpModel& model, const WorkingLimits& limits,
                                std::optional<double> incumbent_cutoff = {});

struct HeuristicGates {
  double min_int_fixing = 0.5;
};

enum class GateOutcome { kPassed, kIntegerFixing, kTotalFixing, kNoReference };

const char* to_string(GateOutcome outcome);

struct HeuristicCallRecord {
  std::string instance_id;
  int seed = 0;
  NeighborhoodMode mode = NeighborhoodMode::kRens;
  bool executed = false;
  bool solution_found = false;
  // Strictly better than the best solution known when the call started.
  bool best_found = false;
  double fixing_rate = 0.0;
  // NaN when the integer gate stopped the call before presolve.
  double total_fixing_rate = 0.0;
  int num_references = 0;
  GateOutcome gate = GateOutcome::kPassed;
  SubsolveStatus status = SubsolveStatus::kAbortedFixingGate;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double wall_time = 0.0;
  // Includes the model's objective offset.
  std::optional<double> objective;
  // Original-space solution, present iff solution_found.
  std::vector<double> solution;
};

// Compares the reported fields: mode, wall time and the solution vector are
// excluded.
bool same_outcome(const HeuristicCallRecord& a, const HeuristicCallRecord& b);

// Builds the neighborhood from refs (the LP optimum alone for RENS, the
// selected references for MRENS), applies both fixing gates and solves the
// sub-MILP. best_known is the best objective known before the call,
// offset included.
HeuristicCallRecord run_heuristic_call(const MilpModel& model, const ReferenceSet& refs,
                                       NeighborhoodMode mode, const WorkingLimits& limits,
                                       const HeuristicGates& gates = {},
                                       std::optional<double> best_known = {});

}  // namespace mrens

#endif  // MRENS_SUBSOLVER_H_
