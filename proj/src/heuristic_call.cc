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

#include <chrono>
#include <cmath>
#include <limits>

#include "mrens/subsolver.h"

namespace mrens {

const char* to_string(GateOutcome outcome) {
  switch (outcome) {
    case GateOutcome::kPassed: return "passed";
    case GateOutcome::kIntegerFixing: return "integer-fixing";
    case GateOutcome::kTotalFixing: return "total-fixing";
    case GateOutcome::kNoReference: return "no-reference";
  }
  return "unknown";
}

bool same_outcome(const HeuristicCallRecord& a, const HeuristicCallRecord& b) {
  const auto same_double = [](double x, double y) {
    return x == y || (std::isnan(x) && std::isnan(y));
  };
  return a.instance_id == b.instance_id && a.seed == b.seed && a.executed == b.executed &&
         a.solution_found == b.solution_found && a.best_found == b.best_found &&
         same_double(a.fixing_rate, b.fixing_rate) &&
         same_double(a.total_fixing_rate, b.total_fixing_rate) &&
         a.num_references == b.num_references && a.gate == b.gate &&
         a.status == b.status && a.nodes == b.nodes &&
         a.lp_iterations == b.lp_iterations && a.objective == b.objective;
}

HeuristicCallRecord run_heuristic_call(const MilpModel& model, const ReferenceSet& refs,
                                       NeighborhoodMode mode, const WorkingLimits& limits,
                                       const HeuristicGates& gates,
                                       std::optional<double> best_known) {
  limits.validate();
  const auto start = std::chrono::steady_clock::now();
  HeuristicCallRecord record;
  record.mode = mode;
  record.total_fixing_rate = std::numeric_limits<double>::quiet_NaN();
  const auto finish = [&]() -> HeuristicCallRecord {
    record.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::move(record);
  };

  if (refs.all_solutions.empty() || refs.selected.empty()) {
    record.gate = GateOutcome::kNoReference;
    return finish();
  }

  NeighborhoodBounds bounds;
  if (mode == NeighborhoodMode::kRens) {
    record.num_references = 1;
    bounds = rens_bounds(model, refs.all_solutions.front().values);
  } else {
    std::vector<std::vector<double>> points;
    for (const Solution& s : refs.selected) points.push_back(s.values);
    record.num_references = static_cast<int>(points.size());
    bounds = mrens_bounds(model, points);
  }
  record.fixing_rate = fixing_rate(bounds, model);
  if (!execution_gate(bounds, model, gates.min_int_fixing)) {
    record.gate = GateOutcome::kIntegerFixing;
    return finish();
  }

  const MilpModel sub = build_submilp(model, bounds);
  const PresolveResult reduced = presolve(sub);
  record.total_fixing_rate = reduced.fixed_fraction_total;
  if (!reduced.infeasible &&
      reduced.fixed_fraction_total < limits.min_total_fixing_after_presolve) {
    record.gate = GateOutcome::kTotalFixing;
    return finish();
  }

  record.executed = true;
  if (reduced.infeasible) {
    record.status = SubsolveStatus::kInfeasible;
    return finish();
  }
  const SubsolveResult search = branch_and_bound(reduced.reduced, limits);
  record.status = search.status;
  record.nodes = search.nodes_processed;
  record.lp_iterations = search.lp_iterations;
  if (search.best_solution) {
    std::vector<double> x = reduced.lift(search.best_solution->values);
    if (check_feasible(model, x, kFeasibilityTolerance)) {
      record.solution_found = true;
      record.objective = model.evaluate_objective(x) + model.objective_offset();
      record.best_found =
          !best_known || *record.objective < *best_known - kObjectiveTolerance;
      record.solution = std::move(x);
    }
  }
  return finish();
}

}  // namespace mrens
