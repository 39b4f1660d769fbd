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
#include <memory>
#include <queue>

#include "mrens/subsolver.h"

namespace mrens {

namespace {

struct BoundChange {
  int var = 0;
  double lower = 0.0;
  double upper = 0.0;
};

struct Node {
  std::int64_t id = 0;
  double bound = -kInfinity;
  // Cumulative changes from the root, applied in order.
  std::vector<BoundChange> changes;
  std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

// Most fractional integer variable, lowest index on ties; -1 when integral.
int branching_variable(const MilpModel& model, std::span<const double> x) {
  int best = -1;
  double best_score = kIntegralityTolerance;
  for (int j : model.integer_vars()) {
    const double f = x[j] - std::floor(x[j]);
    const double score = std::min(f, 1.0 - f);
    if (score > best_score) {
      best = j;
      best_score = score;
    }
  }
  return best;
}

// Integer values rounded when that keeps the point feasible.
std::vector<double> polish(const MilpModel& model, std::span<const double> x) {
  std::vector<double> rounded(x.begin(), x.begin() + model.num_vars());
  for (int j : model.integer_vars()) rounded[j] = std::round(rounded[j]);
  if (max_violation(model, rounded) <= kFeasibilityTolerance) return rounded;
  return {x.begin(), x.begin() + model.num_vars()};
}

}  // namespace

const char* to_string(SubsolveStatus status) {
  switch (status) {
    case SubsolveStatus::kOptimal: return "optimal";
    case SubsolveStatus::kFeasibleLimitHit: return "feasible-limit-hit";
    case SubsolveStatus::kInfeasible: return "infeasible";
    case SubsolveStatus::kAbortedFixingGate: return "aborted-fixing-gate";
    case SubsolveStatus::kLimitNoSolution: return "limit-no-solution";
    case SubsolveStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

void WorkingLimits::validate() const {
  if (node_limit <= 0 || stalling_node_limit <= 0) {
    throw ContractViolation("node limits must be positive");
  }
  if (!(min_total_fixing_after_presolve >= 0.0 && min_total_fixing_after_presolve <= 1.0)) {
    throw ContractViolation("total fixing threshold must lie in [0, 1]");
  }
  if (time_limit && !(*time_limit > 0.0)) {
    throw ContractViolation("time limit must be positive");
  }
}

WorkingLimits WorkingLimits::unlimited() {
  WorkingLimits limits;
  limits.node_limit = std::numeric_limits<std::int64_t>::max();
  limits.stalling_node_limit = std::numeric_limits<std::int64_t>::max();
  limits.min_total_fixing_after_presolve = 0.0;
  return limits;
}

SubsolveResult branch_and_bound(const MilpModel& model, const WorkingLimits& limits,
                                std::optional<double> incumbent_cutoff) {
  limits.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  SubsolveResult result;
  double cutoff = incumbent_cutoff.value_or(kInfinity);
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::int64_t next_id = 0;
  open.push({next_id++, -kInfinity, {}, nullptr});

  bool limit_hit = false;
  bool incomplete = false;
  std::vector<double> lower, upper;
  while (true) {
    while (!open.empty() && open.top().bound >= cutoff - kObjectiveTolerance) open.pop();
    if (open.empty()) break;
    if (result.nodes_processed >= limits.node_limit ||
        result.stall_nodes_at_end >= limits.stalling_node_limit) {
      limit_hit = true;
      break;
    }
    if (limits.time_limit &&
        std::chrono::duration<double>(Clock::now() - start).count() >= *limits.time_limit) {
      limit_hit = true;
      break;
    }

    Node node = open.top();
    open.pop();
    lower = model.lower();
    upper = model.upper();
    for (const BoundChange& c : node.changes) {
      lower[c.var] = c.lower;
      upper[c.var] = c.upper;
    }
    const LpSolution lp = solve_lp(
        model, {.lower = lower, .upper = upper, .warm_basis = node.basis.get()}, limits.lp);
    ++result.nodes_processed;
    if (result.best_solution) ++result.stall_nodes_at_end;
    result.lp_iterations += lp.iterations;

    if (lp.status == LpStatus::kInfeasible) continue;
    if (lp.status == LpStatus::kIterationLimit) {
      incomplete = true;
      continue;
    }
    if (lp.status == LpStatus::kUnbounded) {
      // Integer boxes are bounded in practice; an unbounded relaxation with
      // no incumbent leaves the sub-MILP unbounded or infeasible.
      result.status = SubsolveStatus::kUnbounded;
      result.dual_bound = -kInfinity;
      return result;
    }
    if (lp.objective_value >= cutoff - kObjectiveTolerance) continue;

    const int branch = branching_variable(model, lp.x);
    if (branch < 0) {
      std::vector<double> x = polish(model, lp.x);
      Solution solution = make_solution(model, x);
      solution.kind = SolutionKind::kIntegral;
      if (solution.objective_value < cutoff - kObjectiveTolerance) {
        cutoff = solution.objective_value;
        result.best_solution = std::move(solution);
        result.stall_nodes_at_end = 0;
        result.improvement_nodes.push_back(result.nodes_processed);
      }
      continue;
    }

    auto basis = std::make_shared<const Basis>(lp.basis);
    const double v = lp.x[branch];
    Node down{next_id++, lp.objective_value, node.changes, basis};
    down.changes.push_back({branch, lower[branch], std::floor(v)});
    Node up{next_id++, lp.objective_value, std::move(node.changes), basis};
    up.changes.push_back({branch, std::ceil(v), upper[branch]});
    open.push(std::move(down));
    open.push(std::move(up));
  }

  if (limit_hit || incomplete) {
    result.status = result.best_solution ? SubsolveStatus::kFeasibleLimitHit
                                         : SubsolveStatus::kLimitNoSolution;
    result.dual_bound = open.empty() ? cutoff : std::min(cutoff, open.top().bound);
  } else {
    result.status =
        result.best_solution ? SubsolveStatus::kOptimal : SubsolveStatus::kInfeasible;
    result.dual_bound = cutoff;
  }
  return result;
}

}  // namespace mrens
