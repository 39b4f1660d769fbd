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

// Experiment orchestration over instance-seed pairs.
//
// A seed is realized as a permutation of the variable order applied before
// anything else runs; seed 0 keeps the original order. For every pair the
// relax-and-cut loop supplies references, the heuristic is called once (unless
// the mode is off) and the full model is then solved by branch-and-bound with
// the best known solution as cutoff.
//
// Time is measured in simplex iterations so that reports are reproducible;
// wall-clock seconds are recorded alongside but only reported on request.

#ifndef MRENS_EXPERIMENT_H_
#define MRENS_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrens/model.h"
#include "mrens/reference_gen.h"
#include "mrens/subsolver.h"

namespace mrens {

enum class ExperimentMode { kOff, kRens, kMrens };

const char* to_string(ExperimentMode mode);
// Accepts "off", "rens" and "mrens"; throws ContractViolation otherwise.
ExperimentMode parse_experiment_mode(const std::string& text);

struct Instance {
  std::string id;
  MilpModel model;
};

struct PermutedModel {
  MilpModel model;
  // Variable k of the permuted model is variable order[k] of the original.
  std::vector<int> order;

  std::vector<double> to_original(const std::vector<double>& x) const;
};

// Deterministic Fisher-Yates shuffle driven by mt19937_64(seed); seed 0 is the
// identity.
std::vector<int> variable_permutation(int n, int seed);
PermutedModel permute_variables(const MilpModel& model, int seed);

struct ExperimentConfig {
  std::vector<int> seeds{0, 1, 2, 3, 4};
  ExperimentMode mode = ExperimentMode::kMrens;
  // Limits of the sub-MILP solve inside the heuristic.
  WorkingLimits limits;
  HeuristicGates gates;
  RefGenConfig refgen;
  // Node limit of the final solve of the full model.
  std::int64_t instance_node_limit = 100000;
};

struct InstanceRun {
  std::string instance_id;
  int seed = 0;
  // optimal, node-limit, infeasible, unbounded, lp-failed or error.
  std::string status;
  // Best objective found, offset included.
  std::optional<double> objective;
  std::int64_t nodes = 0;
  // Simplex iterations over reference generation, heuristic and final solve.
  std::int64_t work = 0;
  double wall_time = 0.0;

  bool solved() const { return status == "optimal" || status == "infeasible"; }
};

struct ModeSummary {
  std::int64_t calls = 0;
  double executed_pct = 0.0;
  double found_pct = 0.0;
  double best_pct = 0.0;
  // Mean integer fixing rate over calls that had a reference, in percent.
  double mean_fixing_pct = 0.0;
};

struct RunMetrics {
  ExperimentMode mode = ExperimentMode::kOff;
  // Both sorted by (instance_id, seed).
  std::vector<HeuristicCallRecord> calls;
  std::vector<InstanceRun> runs;
  ModeSummary summary;
};

// A pure fold over the call records.
ModeSummary summarize_calls(const std::vector<HeuristicCallRecord>& calls);

// Sorts the records and recomputes the summary.
RunMetrics aggregate(ExperimentMode mode, std::vector<HeuristicCallRecord> calls,
                     std::vector<InstanceRun> runs);

// Instance ids must be unique. Failures are recorded per run, never thrown.
RunMetrics run_experiment(const std::vector<Instance>& instances,
                          const ExperimentConfig& config);

}  // namespace mrens

#endif  // MRENS_EXPERIMENT_H_
