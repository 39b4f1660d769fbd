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

#include "mrens/report.h"

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "instances.h"
#include "mrens/mps.h"
#include "oracles.h"

namespace mrens {
namespace {

InstanceRun run(std::string id, int seed, std::int64_t work, std::int64_t nodes,
                std::string status = "optimal") {
  InstanceRun r;
  r.instance_id = std::move(id);
  r.seed = seed;
  r.work = work;
  r.nodes = nodes;
  r.status = std::move(status);
  r.objective = 1.5;
  return r;
}

const ComparisonRow& subset(const Comparison& c, const std::string& name) {
  for (const ComparisonRow& row : c.rows) {
    if (row.subset == name) return row;
  }
  throw std::out_of_range(name);
}

TEST(ShiftedGeomeanTest, Examples) {
  EXPECT_NEAR(shifted_geomean(std::vector<double>{1, 9}, 1), std::sqrt(20.0) - 1, 1e-12);
  EXPECT_NEAR(shifted_geomean(std::vector<double>{1, 9}, 1), 3.4721, 1e-4);
  for (double shift : {0.0, 1.0, 100.0}) {
    EXPECT_NEAR(shifted_geomean(std::vector<double>{5}, shift), 5.0, 1e-12);
    EXPECT_NEAR(shifted_geomean(std::vector<double>{7, 7, 7}, shift), 7.0, 1e-12);
  }
  EXPECT_THROW(shifted_geomean(std::vector<double>{}, 1), ContractViolation);
  EXPECT_THROW(shifted_geomean(std::vector<double>{-1}, 1), ContractViolation);
  EXPECT_THROW(shifted_geomean(std::vector<double>{1}, -1), ContractViolation);
}

TEST(ShiftedGeomeanTest, BoundedByMinAndMax) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> value(0.0, 1000.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(1 + trial % 7);
    for (double& x : v) x = value(rng);
    const double g = shifted_geomean(v, 10.0);
    EXPECT_GE(g, *std::min_element(v.begin(), v.end()) - 1e-9);
    EXPECT_LE(g, *std::max_element(v.begin(), v.end()) + 1e-9);
  }
}

TEST(CompareTest, IdenticalMetrics) {
  RunMetrics a;
  a.runs = {run("x", 0, 10, 5), run("y", 0, 30, 7)};
  const Comparison c = categorize_and_compare(a, a);
  ASSERT_EQ(c.rows.size(), 4u);
  EXPECT_EQ(subset(c, "all").count, 2);
  EXPECT_EQ(format_quotient(subset(c, "all").time_quotient()), "1.00");
  EXPECT_EQ(format_quotient(subset(c, "all").nodes_quotient()), "1.00");
  EXPECT_EQ(subset(c, "affected").count, 0);
  EXPECT_EQ(format_quotient(subset(c, "affected").time_quotient()), "-");
}

TEST(CompareTest, HalfTheTime) {
  RunMetrics a, b;
  a.runs = {run("x", 0, 10, 5), run("y", 0, 30, 7)};
  b.runs = {run("x", 0, 20, 5), run("y", 0, 60, 7)};
  // Unit shift would bias the quotient; compare unshifted times.
  const Comparison c = categorize_and_compare(a, b, {.time_shift = 0.0});
  EXPECT_EQ(format_quotient(subset(c, "all").time_quotient()), "0.50");
  EXPECT_NEAR(*subset(c, "all").time_quotient(), 0.5, 1e-12);
}

TEST(CompareTest, AffectedAndSolvedSubsets) {
  RunMetrics a, b;
  a.runs = {run("p", 0, 10, 5), run("q", 0, 10, 5), run("r", 0, 10, 5),
            run("s", 0, 10, 5, "node-limit")};
  b.runs = {run("p", 0, 10, 5), run("q", 0, 10, 9), run("r", 0, 10, 5), run("s", 0, 10, 8)};
  HeuristicCallRecord call;
  call.instance_id = "r";
  a.calls = {call};
  call.executed = true;
  b.calls = {call};
  const Comparison c = categorize_and_compare(a, b);
  EXPECT_EQ(subset(c, "all").count, 4);
  EXPECT_EQ(subset(c, "both-solved").count, 3);
  EXPECT_EQ(subset(c, "affected").count, 3);
  EXPECT_EQ(subset(c, "affected-solved").count, 2);
  EXPECT_EQ(subset(c, "all").solved_a, 3);
  EXPECT_EQ(subset(c, "all").solved_b, 4);
}

TEST(CompareTest, MismatchedUniversesAreRejected) {
  RunMetrics a, b;
  a.runs = {run("x", 0, 1, 1)};
  b.runs = {run("x", 1, 1, 1)};
  EXPECT_THROW(categorize_and_compare(a, b), ContractViolation);
  b.runs = {run("x", 0, 1, 1), run("y", 0, 1, 1)};
  EXPECT_THROW(categorize_and_compare(a, b), ContractViolation);
}

TEST(CompareTest, InvariantToInstanceOrder) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> work(0, 5000);
  std::vector<InstanceRun> runs_a, runs_b;
  for (int k = 0; k < 40; ++k) {
    const std::string id = "i" + std::to_string(k);
    runs_a.push_back(run(id, k % 5, work(rng), work(rng), k % 7 ? "optimal" : "node-limit"));
    runs_b.push_back(run(id, k % 5, work(rng), work(rng)));
  }
  const Comparison reference = categorize_and_compare(
      aggregate(ExperimentMode::kMrens, {}, runs_a), aggregate(ExperimentMode::kRens, {}, runs_b));
  for (int shuffle = 0; shuffle < 10; ++shuffle) {
    std::shuffle(runs_a.begin(), runs_a.end(), rng);
    std::shuffle(runs_b.begin(), runs_b.end(), rng);
    RunMetrics a;
    a.runs = runs_a;
    RunMetrics b;
    b.runs = runs_b;
    const Comparison c = categorize_and_compare(a, b);
    for (std::size_t k = 0; k < c.rows.size(); ++k) {
      EXPECT_EQ(c.rows[k].count, reference.rows[k].count);
      EXPECT_EQ(c.rows[k].time_quotient(), reference.rows[k].time_quotient());
      EXPECT_EQ(c.rows[k].nodes_quotient(), reference.rows[k].nodes_quotient());
    }
  }
}

TEST(FormatTest, TwoDecimalQuotients) {
  EXPECT_EQ(format_quotient(0.97), "0.97");
  EXPECT_EQ(format_quotient(0.774), "0.77");
  EXPECT_EQ(format_quotient(1.0), "1.00");
  EXPECT_EQ(format_quotient(std::nullopt), "-");
  EXPECT_EQ(format_quotient(std::nan("")), "-");
}

TEST(CsvTest, RecordsRoundTripExactly) {
  std::vector<Instance> instances{{"knap,sack", testing::knapsack()},
                                  {"blocks", testing::block_family(2)},
                                  {"parity", testing::parity(5)}};
  const RunMetrics metrics = run_experiment(instances, {});
  for (bool wall : {false, true}) {
    std::ostringstream calls_out, runs_out;
    write_calls_csv(metrics.calls, calls_out, wall);
    write_runs_csv(metrics.runs, runs_out, wall);
    std::istringstream calls_in(calls_out.str()), runs_in(runs_out.str());
    const auto calls = read_calls_csv(calls_in);
    const auto runs = read_runs_csv(runs_in);
    ASSERT_EQ(calls.size(), metrics.calls.size());
    for (std::size_t k = 0; k < calls.size(); ++k) {
      EXPECT_TRUE(same_outcome(calls[k], metrics.calls[k]));
      EXPECT_EQ(calls[k].mode, metrics.calls[k].mode);
    }
    std::ostringstream again;
    write_calls_csv(calls, again, wall);
    EXPECT_EQ(again.str(), calls_out.str());
    std::ostringstream runs_again;
    write_runs_csv(runs, runs_again, wall);
    EXPECT_EQ(runs_again.str(), runs_out.str());

    // Tables regenerate from the raw records.
    const RunMetrics reread = aggregate(metrics.mode, calls, runs);
    EXPECT_EQ(format_call_table(std::vector<RunMetrics>{reread}),
              format_call_table(std::vector<RunMetrics>{metrics}));
    EXPECT_EQ(format_comparison_table(categorize_and_compare(reread, metrics)),
              format_comparison_table(categorize_and_compare(metrics, metrics)));
  }
}

TEST(CsvTest, MalformedInputIsRejected) {
  std::istringstream wrong_header("instance,seed\n");
  EXPECT_THROW(read_runs_csv(wrong_header), ParseError);
  std::istringstream short_row("instance,seed,status,objective,nodes,work\nx,0,optimal\n");
  EXPECT_THROW(read_runs_csv(short_row), ParseError);
  std::istringstream bad_number("instance,seed,status,objective,nodes,work\nx,zero,optimal,,1,1\n");
  EXPECT_THROW(read_runs_csv(bad_number), ParseError);
}

TEST(JsonTest, SummaryMentionsSeedRealization) {
  const RunMetrics metrics = run_experiment({{"k", testing::knapsack()}}, {});
  const std::string json = summary_json(metrics, {});
  EXPECT_NE(json.find("seed_realization"), std::string::npos);
  EXPECT_NE(json.find("\"time_unit\": \"simplex iterations\""), std::string::npos);
  const std::string cmp = comparison_json(categorize_and_compare(metrics, metrics));
  EXPECT_NE(cmp.find("affected-solved"), std::string::npos);
}

TEST(TableTest, PercentagesStayInRange) {
  const auto metrics = run_experiment({{"k", testing::knapsack()}, {"b", testing::block_family(3)}},
                                      {.mode = ExperimentMode::kRens});
  const ModeSummary& s = metrics.summary;
  for (double pct : {s.executed_pct, s.found_pct, s.best_pct, s.mean_fixing_pct}) {
    EXPECT_GE(pct, 0.0);
    EXPECT_LE(pct, 100.0);
  }
  const std::string table = format_call_table(std::vector<RunMetrics>{metrics});
  EXPECT_NE(table.find("rens"), std::string::npos);
}

}  // namespace
}  // namespace mrens
