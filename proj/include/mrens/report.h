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

// Aggregated reports: per-mode call statistics, setting comparisons over
// instance subsets, and the CSV/JSON files they are regenerated from.
//
// Doubles are written in shortest round-trip form, so reading a CSV back
// reproduces the records bit for bit.

#ifndef MRENS_REPORT_H_
#define MRENS_REPORT_H_

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mrens/experiment.h"

namespace mrens {

inline constexpr double kTimeShift = 1.0;
inline constexpr double kNodeShift = 100.0;

// exp(mean(log(v + shift))) - shift. Throws ContractViolation on an empty
// list, negative values or a negative shift.
double shifted_geomean(std::span<const double> values, double shift);

struct ComparisonOptions {
  // Use wall-clock seconds instead of simplex iterations for time.
  bool wall_time = false;
  double time_shift = kTimeShift;
  double node_shift = kNodeShift;
};

struct ComparisonRow {
  std::string subset;
  std::int64_t count = 0;
  std::int64_t solved_a = 0;
  std::int64_t solved_b = 0;
  // Absent for an empty subset.
  std::optional<double> time_a, time_b, nodes_a, nodes_b;

  // a / b; absent when undefined.
  std::optional<double> time_quotient() const;
  std::optional<double> nodes_quotient() const;
};

struct Comparison {
  std::string label_a;
  std::string label_b;
  // all, both-solved, affected, affected-solved.
  std::vector<ComparisonRow> rows;
};

// A pair is affected when its node counts or its call records differ. Throws
// ContractViolation when the instance-seed universes differ.
Comparison categorize_and_compare(const RunMetrics& a, const RunMetrics& b,
                                  const ComparisonOptions& options = {});

// Two decimals, or "-" when absent or not finite.
std::string format_quotient(std::optional<double> quotient);

std::string format_call_table(std::span<const RunMetrics> metrics);
std::string format_comparison_table(const Comparison& comparison);

void write_calls_csv(const std::vector<HeuristicCallRecord>& calls, std::ostream& out,
                     bool wall_time = false);
void write_runs_csv(const std::vector<InstanceRun>& runs, std::ostream& out,
                    bool wall_time = false);
// Throw ParseError on malformed input.
std::vector<HeuristicCallRecord> read_calls_csv(std::istream& in);
std::vector<InstanceRun> read_runs_csv(std::istream& in);

std::string summary_json(const RunMetrics& metrics, const ExperimentConfig& config);
std::string comparison_json(const Comparison& comparison);

}  // namespace mrens

#endif  // MRENS_REPORT_H_
