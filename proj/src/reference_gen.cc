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

#include "mrens/reference_gen.h"

#include <algorithm>
#include <cmath>

namespace mrens {

namespace {

constexpr double kDuplicateTolerance = 1e-9;
constexpr double kConvergenceTolerance = 1e-8;
constexpr int kNonImprovingLimit = 3;

bool same_values(const Solution& a, const Solution& b) {
  if (a.values.size() != b.values.size()) return false;
  for (std::size_t j = 0; j < a.values.size(); ++j) {
    if (std::abs(a.values[j] - b.values[j]) > kDuplicateTolerance) return false;
  }
  return true;
}

bool same_cut(const GmiCut& a, const GmiCut& b) {
  if (a.coefficients.size() != b.coefficients.size() ||
      std::abs(a.rhs - b.rhs) > kDuplicateTolerance) {
    return false;
  }
  for (std::size_t k = 0; k < a.coefficients.size(); ++k) {
    if (a.coefficients[k].index != b.coefficients[k].index ||
        std::abs(a.coefficients[k].value - b.coefficients[k].value) >
            kDuplicateTolerance) {
      return false;
    }
  }
  return true;
}

}  // namespace

const char* to_string(RefGenStatus status) {
  switch (status) {
    case RefGenStatus::kOk: return "ok";
    case RefGenStatus::kLpInfeasible: return "lp-infeasible";
    case RefGenStatus::kLpUnbounded: return "lp-unbounded";
    case RefGenStatus::kLpFailed: return "lp-failed";
  }
  return "unknown";
}

LagrangianObjective lagrangian_objective(std::span<const double> objective,
                                         std::span<const GmiCut> cuts,
                                         std::span<const double> multipliers) {
  if (cuts.size() != multipliers.size()) {
    throw ContractViolation("one multiplier per cut is required");
  }
  LagrangianObjective result{{objective.begin(), objective.end()}, 0.0};
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double lambda = multipliers[i];
    if (!(lambda >= 0.0)) throw ContractViolation("multipliers must be nonnegative");
    if (lambda == 0.0) continue;
    for (const SparseEntry& e : cuts[i].coefficients) {
      result.linear.at(e.index) -= lambda * e.value;
    }
    result.constant += lambda * cuts[i].rhs;
  }
  return result;
}

LagrangianState update_multipliers(std::span<const double> objective,
                                   LagrangianState state,
                                   std::span<const double> x) {
  const LagrangianObjective lagrangian =
      lagrangian_objective(objective, state.cut_pool, state.multipliers);
  double dual = lagrangian.constant;
  for (std::size_t j = 0; j < lagrangian.linear.size(); ++j) {
    dual += lagrangian.linear[j] * x[j];
  }
  state.last_dual_value = dual;
  if (dual > state.best_dual_value + 1e-9 || !std::isfinite(state.best_dual_value)) {
    state.best_dual_value = dual;
    state.non_improving = 0;
  } else if (++state.non_improving >= kNonImprovingLimit) {
    state.step_parameter *= 0.5;
    state.non_improving = 0;
  }

  std::vector<double> subgradient(state.cut_pool.size());
  double norm2 = 0.0;
  for (std::size_t i = 0; i < state.cut_pool.size(); ++i) {
    subgradient[i] = cut_violation(state.cut_pool[i], x);
    norm2 += subgradient[i] * subgradient[i];
  }
  const int iteration = state.iteration++;
  if (norm2 == 0.0) return state;

  double step = 0.0;
  if (std::isfinite(state.incumbent_primal_value)) {
    step = state.step_parameter *
           std::max(0.0, state.incumbent_primal_value - dual) / norm2;
  } else {
    step = state.step_parameter / (iteration + 1);
  }
  for (std::size_t i = 0; i < subgradient.size(); ++i) {
    state.multipliers[i] = std::max(0.0, state.multipliers[i] + step * subgradient[i]);
  }
  return state;
}

std::vector<Solution> select_references(std::span<const Solution> solutions) {
  std::vector<Solution> selected;
  if (solutions.empty()) return selected;
  const std::size_t k = solutions.size() - 1;
  std::vector<std::size_t> picks{0};
  if (k >= 2) picks.push_back(k - 1);
  if (k >= 1) picks.push_back(k);
  for (std::size_t idx : picks) {
    const Solution& candidate = solutions[idx];
    const bool duplicate = std::any_of(selected.begin(), selected.end(),
                                       [&](const Solution& s) {
                                         return same_values(s, candidate);
                                       });
    if (!duplicate) selected.push_back(candidate);
  }
  return selected;
}

ReferenceSet run_relax_and_cut(const MilpModel& model, const RefGenConfig& config) {
  ReferenceSet refs;
  const LpSolution root = solve_lp(model, {}, config.lp);
  refs.lp_iterations = root.iterations;
  switch (root.status) {
    case LpStatus::kOptimal: break;
    case LpStatus::kInfeasible: refs.status = RefGenStatus::kLpInfeasible; return refs;
    case LpStatus::kUnbounded: refs.status = RefGenStatus::kLpUnbounded; return refs;
    case LpStatus::kIterationLimit: refs.status = RefGenStatus::kLpFailed; return refs;
  }

  const Solution first = make_solution(model, root.x);
  refs.all_solutions.push_back(first);
  refs.dual_values.push_back(root.objective_value);
  if (first.kind == SolutionKind::kIntegral) {
    refs.integral_found.push_back(first);
    refs.selected = refs.all_solutions;
    return refs;
  }

  LagrangianState state;
  state.step_parameter = config.initial_step;
  state.incumbent_primal_value = config.primal_bound;
  LpSolution current = root;
  for (int it = 0; it < config.max_iterations; ++it) {
    refs.iterations = it + 1;

    // Step 1: separate at the current optimum.
    const auto cuts =
        generate_gmi_round(model, current, {.max_cuts = config.cuts_per_round});
    int new_cuts = 0;
    for (const GmiCut& cut : cuts) {
      const bool known = std::any_of(state.cut_pool.begin(), state.cut_pool.end(),
                                     [&](const GmiCut& c) { return same_cut(c, cut); });
      if (known) continue;
      state.cut_pool.push_back(cut);
      state.multipliers.push_back(0.0);
      ++new_cuts;
    }
    refs.cuts_generated += new_cuts;
    if (state.cut_pool.empty()) break;

    // Steps 2-3: price the pool into the objective and move the multipliers.
    const std::vector<double> before = state.multipliers;
    state = update_multipliers(model.objective(), std::move(state), current.x);
    double change = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i) {
      change = std::max(change, std::abs(state.multipliers[i] - before[i]));
    }
    if (new_cuts == 0 && change < kConvergenceTolerance) break;

    // Step 4: re-solve over the unchanged feasible region.
    const LagrangianObjective objective =
        lagrangian_objective(model.objective(), state.cut_pool, state.multipliers);
    LpSolution next = solve_lp(
        model, {.objective = objective.linear, .warm_basis = &current.basis}, config.lp);
    refs.lp_iterations += next.iterations;
    if (next.status != LpStatus::kOptimal) break;
    refs.dual_values.push_back(next.objective_value + objective.constant);
    current = std::move(next);

    Solution solution = make_solution(model, current.x);
    if (!same_values(solution, refs.all_solutions.back())) {
      refs.all_solutions.push_back(solution);
    }
    // Step 5: an integral optimum is a feasible MILP solution; stop.
    if (solution.kind == SolutionKind::kIntegral) {
      state.incumbent_primal_value =
          std::min(state.incumbent_primal_value, solution.objective_value);
      refs.integral_found.push_back(std::move(solution));
      break;
    }
  }
  refs.selected = select_references(refs.all_solutions);
  return refs;
}

}  // namespace mrens
