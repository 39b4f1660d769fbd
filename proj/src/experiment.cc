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

#include "mrens/experiment.h"

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>
#include <set>
#include <tuple>

#include <fmt/format.h>

namespace mrens {

namespace {

// Uniform draw from [0, bound) without the implementation-defined
// distributions of <random>.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % bound;
}

double percent(std::int64_t part, std::int64_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

InstanceRun solve_instance(const Instance& instance, int seed,
                           const ExperimentConfig& config,
                           std::vector<HeuristicCallRecord>& calls) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  InstanceRun run;
  run.instance_id = instance.id;
  run.seed = seed;
  const auto finish = [&]() -> InstanceRun {
    run.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return std::move(run);
  };

  const PermutedModel permuted = permute_variables(instance.model, seed);
  const MilpModel& model = permuted.model;
  const ReferenceSet refs = run_relax_and_cut(model, config.refgen);
  run.work += refs.lp_iterations;
  switch (refs.status) {
    case RefGenStatus::kOk: break;
    case RefGenStatus::kLpInfeasible: run.status = "infeasible"; return finish();
    case RefGenStatus::kLpUnbounded: run.status = "unbounded"; return finish();
    case RefGenStatus::kLpFailed: run.status = "lp-failed"; return finish();
  }

  std::optional<double> best;
  for (const Solution& s : refs.integral_found) {
    if (!best || s.objective_value < *best) best = s.objective_value;
  }
  if (config.mode != ExperimentMode::kOff) {
    const NeighborhoodMode mode = config.mode == ExperimentMode::kRens
                                      ? NeighborhoodMode::kRens
                                      : NeighborhoodMode::kMrens;
    std::optional<double> best_known;
    if (best) best_known = *best + model.objective_offset();
    HeuristicCallRecord call =
        run_heuristic_call(model, refs, mode, config.limits, config.gates, best_known);
    call.instance_id = instance.id;
    call.seed = seed;
    if (call.best_found) best = model.evaluate_objective(call.solution);
    if (!call.solution.empty()) call.solution = permuted.to_original(call.solution);
    run.work += call.lp_iterations;
    calls.push_back(std::move(call));
  }

  WorkingLimits limits = WorkingLimits::unlimited();
  limits.node_limit = config.instance_node_limit;
  limits.lp = config.limits.lp;
  const SubsolveResult result = branch_and_bound(model, limits, best);
  run.nodes = result.nodes_processed;
  run.work += result.lp_iterations;
  if (result.best_solution) best = result.best_solution->objective_value;
  if (best) run.objective = *best + model.objective_offset();
  switch (result.status) {
    case SubsolveStatus::kOptimal:
      run.status = "optimal";
      break;
    case SubsolveStatus::kInfeasible:
      // Nothing beats the cutoff, so the cutoff solution is optimal.
      run.status = best ? "optimal" : "infeasible";
      break;
    case SubsolveStatus::kUnbounded:
      run.status = "unbounded";
      break;
    default:
      run.status = "node-limit";
      break;
  }
  return finish();
}

}  // namespace

const char* to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kOff: return "off";
    case ExperimentMode::kRens: return "rens";
    case ExperimentMode::kMrens: return "mrens";
  }
  return "unknown";
}

ExperimentMode parse_experiment_mode(const std::string& text) {
  if (text == "off") return ExperimentMode::kOff;
  if (text == "rens") return ExperimentMode::kRens;
  if (text == "mrens") return ExperimentMode::kMrens;
  throw ContractViolation(fmt::format("unknown mode '{}'", text));
}

std::vector<double> PermutedModel::to_original(const std::vector<double>& x) const {
  if (x.size() != order.size()) throw ContractViolation("point does not match the permutation");
  std::vector<double> original(x.size());
  for (std::size_t k = 0; k < order.size(); ++k) original[order[k]] = x[k];
  return original;
}

std::vector<int> variable_permutation(int n, int seed) {
  std::vector<int> order(n);
  for (int j = 0; j < n; ++j) order[j] = j;
  if (seed == 0) return order;
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  for (int i = n - 1; i > 0; --i) {
    std::swap(order[i], order[uniform_below(rng, static_cast<std::uint64_t>(i) + 1)]);
  }
  return order;
}

PermutedModel permute_variables(const MilpModel& model, int seed) {
  const int n = model.num_vars();
  std::vector<int> order = variable_permutation(n, seed);
  std::vector<int> position(n);
  for (int k = 0; k < n; ++k) position[order[k]] = k;

  std::vector<double> objective(n), lower(n), upper(n);
  std::vector<std::string> names;
  if (!model.var_names().empty()) names.resize(n);
  for (int k = 0; k < n; ++k) {
    objective[k] = model.objective()[order[k]];
    lower[k] = model.lower()[order[k]];
    upper[k] = model.upper()[order[k]];
    if (!names.empty()) names[k] = model.var_names()[order[k]];
  }
  std::vector<int> integers;
  for (int j : model.integer_vars()) integers.push_back(position[j]);
  std::vector<Row> rows = model.rows();
  for (Row& row : rows) {
    for (SparseEntry& e : row.entries) e.index = position[e.index];
  }
  return {MilpModel(std::move(objective), std::move(rows), std::move(lower), std::move(upper),
                    std::move(integers), std::move(names), model.objective_offset(),
                    model.name()),
          std::move(order)};
}

ModeSummary summarize_calls(const std::vector<HeuristicCallRecord>& calls) {
  ModeSummary summary;
  std::int64_t executed = 0, found = 0, best = 0, with_reference = 0;
  double fixing = 0.0;
  for (const HeuristicCallRecord& call : calls) {
    executed += call.executed;
    found += call.solution_found;
    best += call.best_found;
    if (call.gate != GateOutcome::kNoReference) {
      ++with_reference;
      fixing += call.fixing_rate;
    }
  }
  summary.calls = static_cast<std::int64_t>(calls.size());
  summary.executed_pct = percent(executed, summary.calls);
  summary.found_pct = percent(found, summary.calls);
  summary.best_pct = percent(best, summary.calls);
  summary.mean_fixing_pct = with_reference == 0 ? 0.0 : 100.0 * fixing / with_reference;
  return summary;
}

RunMetrics aggregate(ExperimentMode mode, std::vector<HeuristicCallRecord> calls,
                     std::vector<InstanceRun> runs) {
  const auto key = [](const auto& r) { return std::tie(r.instance_id, r.seed); };
  std::stable_sort(calls.begin(), calls.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::stable_sort(runs.begin(), runs.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  RunMetrics metrics;
  metrics.mode = mode;
  metrics.summary = summarize_calls(calls);
  metrics.calls = std::move(calls);
  metrics.runs = std::move(runs);
  return metrics;
}

RunMetrics run_experiment(const std::vector<Instance>& instances,
                          const ExperimentConfig& config) {
  config.limits.validate();
  std::set<std::string> ids;
  for (const Instance& instance : instances) {
    if (!ids.insert(instance.id).second) {
      throw ContractViolation(fmt::format("duplicate instance id '{}'", instance.id));
    }
  }
  std::vector<HeuristicCallRecord> calls;
  std::vector<InstanceRun> runs;
  for (const Instance& instance : instances) {
    for (int seed : config.seeds) {
      try {
        runs.push_back(solve_instance(instance, seed, config, calls));
      } catch (const std::exception& e) {
        InstanceRun failed;
        failed.instance_id = instance.id;
        failed.seed = seed;
        failed.status = "error";
        runs.push_back(std::move(failed));
      }
    }
  }
  return aggregate(config.mode, std::move(calls), std::move(runs));
}

}  // namespace mrens
