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

#include "mrens/subsolver.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "instances.h"
#include "oracles.h"

namespace mrens {
namespace {

ReferenceSet reference_set(const MilpModel& model,
                           const std::vector<std::vector<double>>& points) {
  ReferenceSet refs;
  for (const auto& x : points) refs.all_solutions.push_back(make_solution(model, x));
  refs.selected = refs.all_solutions;
  return refs;
}

TEST(PresolveTest, ActivitiesForceBothVariables) {
  ModelBuilder b;
  b.add_variable(0, 1, 1);
  b.add_variable(0, 1, 1);
  b.add_row({{0, 1.0}, {1, 1.0}}, RowSense::kGreaterEqual, 2.0);
  const PresolveResult result = presolve(b.build());
  EXPECT_FALSE(result.infeasible);
  EXPECT_DOUBLE_EQ(result.fixed_fraction_total, 1.0);
  EXPECT_EQ(result.reduced.num_vars(), 0);
  EXPECT_EQ(result.reduced.num_rows(), 0);
  EXPECT_DOUBLE_EQ(result.reduced.objective_offset(), 2.0);
  EXPECT_EQ(result.lift(std::vector<double>{}), (std::vector<double>{1.0, 1.0}));
}

TEST(PresolveTest, FixpointKeepsInputFixings) {
  ModelBuilder b;
  b.add_variable(0, 4, 1, true);
  b.add_variable(2, 2, 1, true);
  b.add_variable(0, 4, 1);
  b.add_variable(1, 1, 1);
  b.add_row({{0, 1.0}, {2, 1.0}}, RowSense::kLessEqual, 10.0);
  const PresolveResult result = presolve(b.build());
  EXPECT_FALSE(result.infeasible);
  EXPECT_DOUBLE_EQ(result.fixed_fraction_total, 0.5);
  EXPECT_EQ(result.original_index, (std::vector<int>{0, 2}));
  // The row is implied by the bounds.
  EXPECT_EQ(result.reduced.num_rows(), 0);
}

TEST(PresolveTest, RoundsPropagatedIntegerBounds) {
  // 2x >= 3 gives x >= 1.5, rounded to 2.
  ModelBuilder b;
  b.add_variable(0, 5, 1, true);
  b.add_variable(0, 5, 1);
  b.add_row({{0, 2.0}}, RowSense::kGreaterEqual, 3.0);
  b.add_row({{0, 1.0}, {1, 1.0}}, RowSense::kLessEqual, 2.0);
  const PresolveResult result = presolve(b.build());
  EXPECT_FALSE(result.infeasible);
  // x = 2 forces y = 0.
  EXPECT_DOUBLE_EQ(result.fixed_fraction_total, 1.0);
  EXPECT_EQ(result.lift(std::vector<double>{}), (std::vector<double>{2.0, 0.0}));
}

TEST(PresolveTest, DetectsInfeasibility) {
  ModelBuilder b;
  b.add_variable(0, 1, 0, true);
  b.add_variable(0, 1, 0, true);
  b.add_row({{0, 1.0}, {1, 1.0}}, RowSense::kGreaterEqual, 3.0);
  EXPECT_TRUE(presolve(b.build()).infeasible);

  // Only integrality makes this one infeasible: 2x = 1.
  ModelBuilder parity;
  parity.add_variable(0, 1, 0, true);
  parity.add_row({{0, 2.0}}, RowSense::kEqual, 1.0);
  EXPECT_TRUE(presolve(parity.build()).infeasible);
}

TEST(PresolveTest, PreservesOptimumOnRandomModels) {
  std::mt19937_64 rng(17);
  int reductions = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const MilpModel model =
        testing::random_model(rng, {.num_vars = 5, .num_rows = 3, .coef = 4, .max_upper = 2});
    const auto original = testing::enumerate_integer(model);
    const PresolveResult result = presolve(model);
    ASSERT_FALSE(result.infeasible);
    EXPECT_LE(result.passes, 10);
    reductions += result.reduced.num_vars() < model.num_vars();
    const auto reduced = testing::enumerate_integer(result.reduced);
    ASSERT_TRUE(reduced.feasible);
    EXPECT_NEAR(reduced.objective + result.reduced.objective_offset(), original.objective,
                1e-9);
    const std::vector<double> lifted = result.lift(reduced.x);
    EXPECT_TRUE(check_feasible(model, lifted));
    EXPECT_NEAR(model.evaluate_objective(lifted), original.objective, 1e-9);
  }
  EXPECT_GT(reductions, 10);
}

TEST(BranchAndBoundTest, Knapsack) {
  const SubsolveResult result =
      branch_and_bound(testing::knapsack(), WorkingLimits::unlimited());
  EXPECT_EQ(result.status, SubsolveStatus::kOptimal);
  ASSERT_TRUE(result.best_solution.has_value());
  EXPECT_NEAR(result.best_solution->objective_value, -9.0, 1e-9);
  EXPECT_EQ(result.best_solution->values, (std::vector<double>{1.0, 1.0, 0.0}));
  EXPECT_EQ(testing::enumerate_integer(testing::knapsack()).objective, -9.0);
}

TEST(BranchAndBoundTest, EmptyBoxWithInfeasibleRow) {
  ModelBuilder b;
  b.add_variable(1, 1, 1, true);
  b.add_variable(0, 0, 1, true);
  b.add_row({{0, 1.0}, {1, 1.0}}, RowSense::kGreaterEqual, 2.0);
  const SubsolveResult result = branch_and_bound(b.build(), {});
  EXPECT_EQ(result.status, SubsolveStatus::kInfeasible);
  EXPECT_FALSE(result.best_solution.has_value());
}

TEST(BranchAndBoundTest, CutoffPrunesEqualSolutions) {
  const SubsolveResult result =
      branch_and_bound(testing::knapsack(), WorkingLimits::unlimited(), -9.0);
  EXPECT_EQ(result.status, SubsolveStatus::kInfeasible);
  EXPECT_FALSE(result.best_solution.has_value());
  const SubsolveResult loose =
      branch_and_bound(testing::knapsack(), WorkingLimits::unlimited(), -8.5);
  EXPECT_EQ(loose.status, SubsolveStatus::kOptimal);
}

TEST(BranchAndBoundTest, MatchesEnumeration) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    // Six variables in [0, 3] or [-2, 1]: twelve binary equivalents.
    const MilpModel model = testing::random_model(
        rng, {.num_vars = 6, .num_rows = 4, .allow_negative_lower = trial % 2 == 1});
    const auto oracle = testing::enumerate_integer(model);
    const SubsolveResult result = branch_and_bound(model, WorkingLimits::unlimited());
    ASSERT_EQ(result.status, SubsolveStatus::kOptimal) << "trial " << trial;
    ASSERT_TRUE(result.best_solution.has_value());
    EXPECT_NEAR(result.best_solution->objective_value, oracle.objective, 1e-6);
    EXPECT_TRUE(check_feasible(model, result.best_solution->values));
  }
}

TEST(BranchAndBoundTest, MixedModelsMatchEnumerationOverIntegerPart) {
  // Each continuous variable is bounded and appears in a single row with a
  // positive coefficient, so for fixed integers its best value is explicit.
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const MilpModel base = testing::random_model(rng, {.num_vars = 5, .num_rows = 3});
    ModelBuilder b;
    for (int j = 0; j < 5; ++j) {
      b.add_variable(base.lower()[j], base.upper()[j], base.objective()[j], true);
    }
    for (int i = 0; i < 3; ++i) b.add_variable(0, 2.5, 1.0);
    for (int i = 0; i < 3; ++i) {
      SparseVector entries = base.row(i).entries;
      entries.push_back({5 + i, 1.0});
      b.add_row(entries, RowSense::kGreaterEqual, base.row(i).rhs);
    }
    const MilpModel model = b.build();
    double best = kInfinity;
    testing::for_each_box_point(base, [&](const std::vector<double>& x) {
      double value = base.evaluate_objective(x);
      for (int i = 0; i < 3; ++i) {
        const double need = std::max(0.0, base.row(i).rhs - base.row_activity(i, x));
        if (need > 2.5) return;
        value += need;
      }
      best = std::min(best, value);
    });
    const SubsolveResult result = branch_and_bound(model, WorkingLimits::unlimited());
    ASSERT_EQ(result.status, SubsolveStatus::kOptimal);
    EXPECT_NEAR(result.best_solution->objective_value, best, 1e-6);
    EXPECT_LE(max_violation(model, result.best_solution->values), 1e-6);
  }
}

TEST(BranchAndBoundTest, NodeLimitIsExact) {
  WorkingLimits limits = WorkingLimits::unlimited();
  limits.node_limit = 50;
  const SubsolveResult result = branch_and_bound(testing::parity(12), limits);
  EXPECT_EQ(result.status, SubsolveStatus::kLimitNoSolution);
  EXPECT_EQ(result.nodes_processed, 50);
}

TEST(BranchAndBoundTest, StallLimitAfterFirstIncumbent) {
  // The root is fractional; the incumbent arrives before the search ends.
  const MilpModel model = testing::knapsack();
  const SubsolveResult full = branch_and_bound(model, WorkingLimits::unlimited());
  ASSERT_FALSE(full.improvement_nodes.empty());
  WorkingLimits limits = WorkingLimits::unlimited();
  limits.stalling_node_limit = 1;
  const SubsolveResult result = branch_and_bound(model, limits);
  const std::int64_t first = full.improvement_nodes.front();
  if (full.nodes_processed > first + 1) {
    EXPECT_EQ(result.status, SubsolveStatus::kFeasibleLimitHit);
    EXPECT_LE(result.nodes_processed, first + 1);
  }
}

// For every stall limit s, the limited search is a prefix of the unlimited
// one and stops after the first gap of more than s nodes between
// improvements, counted from the first incumbent.
TEST(BranchAndBoundTest, StallLimitFollowsTheImprovementTrace) {
  std::mt19937_64 rng(8);
  int multi = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const MilpModel model =
        testing::random_model(rng, {.num_vars = 7, .num_rows = 4, .max_upper = 3});
    const SubsolveResult full = branch_and_bound(model, WorkingLimits::unlimited());
    ASSERT_EQ(full.status, SubsolveStatus::kOptimal);
    multi += full.improvement_nodes.size() > 1;
    for (std::int64_t s = 1; s <= full.nodes_processed; ++s) {
      std::int64_t expected = -1;
      if (full.improvement_nodes.empty()) continue;
      std::int64_t previous = full.improvement_nodes.front();
      for (std::int64_t node : full.improvement_nodes) {
        if (node - previous > s) {
          expected = previous + s;
          break;
        }
        previous = node;
      }
      if (expected < 0 && full.nodes_processed > previous + s) expected = previous + s;

      WorkingLimits limits = WorkingLimits::unlimited();
      limits.stalling_node_limit = s;
      const SubsolveResult result = branch_and_bound(model, limits);
      if (expected < 0) {
        EXPECT_EQ(result.status, SubsolveStatus::kOptimal);
        EXPECT_EQ(result.nodes_processed, full.nodes_processed);
      } else {
        EXPECT_EQ(result.nodes_processed, expected) << "trial " << trial << " s " << s;
        EXPECT_LE(result.stall_nodes_at_end, s);
      }
      for (std::int64_t node : result.improvement_nodes) {
        EXPECT_LE(node, result.nodes_processed);
      }
      ASSERT_FALSE(result.improvement_nodes.empty());
      EXPECT_EQ(result.stall_nodes_at_end,
                result.nodes_processed - result.improvement_nodes.back());
    }
  }
  EXPECT_GT(multi, 5);
}

TEST(BranchAndBoundTest, Deterministic) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const MilpModel model = testing::random_model(rng, {.num_vars = 6, .num_rows = 3});
    WorkingLimits limits;
    limits.node_limit = 7;
    const SubsolveResult a = branch_and_bound(model, limits);
    const SubsolveResult b = branch_and_bound(model, limits);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.nodes_processed, b.nodes_processed);
    EXPECT_EQ(a.improvement_nodes, b.improvement_nodes);
    EXPECT_EQ(a.lp_iterations, b.lp_iterations);
    EXPECT_EQ(a.best_solution.has_value(), b.best_solution.has_value());
    if (a.best_solution) EXPECT_EQ(a.best_solution->values, b.best_solution->values);
  }
}

TEST(WorkingLimitsTest, Validation) {
  WorkingLimits limits;
  EXPECT_NO_THROW(limits.validate());
  limits.node_limit = 0;
  EXPECT_THROW(limits.validate(), ContractViolation);
  limits = {};
  limits.min_total_fixing_after_presolve = 1.5;
  EXPECT_THROW(limits.validate(), ContractViolation);
}

TEST(HeuristicCallTest, IntegerGateAt49Percent) {
  // 100 binaries, 49 fixed by the reference.
  ModelBuilder b;
  for (int j = 0; j < 100; ++j) b.add_variable(0, 1, 1, true);
  const MilpModel model = b.build();
  std::vector<double> x(100, 0.5);
  for (int j = 0; j < 49; ++j) x[j] = 0.0;
  const auto record =
      run_heuristic_call(model, reference_set(model, {x}), NeighborhoodMode::kRens, {});
  EXPECT_FALSE(record.executed);
  EXPECT_FALSE(record.solution_found);
  EXPECT_EQ(record.gate, GateOutcome::kIntegerFixing);
  EXPECT_DOUBLE_EQ(record.fixing_rate, 0.49);
  EXPECT_EQ(record.nodes, 0);

  x[49] = 0.0;
  const auto passed =
      run_heuristic_call(model, reference_set(model, {x}), NeighborhoodMode::kRens, {});
  EXPECT_TRUE(passed.executed);
  EXPECT_TRUE(passed.solution_found);
}

TEST(HeuristicCallTest, TotalFixingGate) {
  // Half the variables are continuous and stay free, so total fixing is 40%.
  ModelBuilder b;
  for (int j = 0; j < 4; ++j) b.add_variable(0, 1, 1, true);
  for (int j = 0; j < 6; ++j) b.add_variable(0, 1, 1);
  const MilpModel model = b.build();
  std::vector<double> x(10, 0.5);
  for (int j = 0; j < 4; ++j) x[j] = 1.0;
  WorkingLimits limits;
  limits.min_total_fixing_after_presolve = 0.41;
  const auto refs = reference_set(model, {x});
  const auto blocked = run_heuristic_call(model, refs, NeighborhoodMode::kRens, limits);
  EXPECT_FALSE(blocked.executed);
  EXPECT_EQ(blocked.gate, GateOutcome::kTotalFixing);
  EXPECT_DOUBLE_EQ(blocked.total_fixing_rate, 0.4);
  limits.min_total_fixing_after_presolve = 0.4;
  EXPECT_TRUE(run_heuristic_call(model, refs, NeighborhoodMode::kRens, limits).executed);
}

TEST(HeuristicCallTest, OverRestrictedSubMilp) {
  const MilpModel model = testing::block_family(2);
  const auto refs = reference_set(model, testing::block_references(2));
  const auto record = run_heuristic_call(model, refs, NeighborhoodMode::kRens, {});
  EXPECT_TRUE(record.executed);
  EXPECT_FALSE(record.solution_found);
  EXPECT_EQ(record.status, SubsolveStatus::kInfeasible);
}

TEST(HeuristicCallTest, MultipleReferencesRecoverAFeasiblePoint) {
  for (int k = 1; k <= 4; ++k) {
    const MilpModel model = testing::block_family(k);
    const auto points = testing::block_references(k);
    const auto refs = reference_set(model, points);
    const auto rens = run_heuristic_call(model, refs, NeighborhoodMode::kRens, {});
    const auto mrens = run_heuristic_call(model, refs, NeighborhoodMode::kMrens, {});
    EXPECT_FALSE(rens.solution_found);
    ASSERT_TRUE(mrens.solution_found);
    EXPECT_EQ(mrens.num_references, 3);
    EXPECT_DOUBLE_EQ(mrens.fixing_rate, 0.5);
    EXPECT_NEAR(*mrens.objective, k, 1e-9);
    EXPECT_TRUE(check_feasible(model, mrens.solution));

    // Enumeration of both sub-MILPs confirms the two outcomes.
    const auto rens_sub = build_submilp(model, rens_bounds(model, points[0]));
    const auto mrens_sub = build_submilp(model, mrens_bounds(model, points));
    EXPECT_FALSE(testing::enumerate_integer(rens_sub).feasible);
    EXPECT_TRUE(testing::enumerate_integer(mrens_sub).feasible);
  }
}

TEST(HeuristicCallTest, BestFoundComparesWithTheKnownBest) {
  const MilpModel model = testing::knapsack();
  const auto refs = reference_set(model, {{1.0, 1.0, 0.0}});
  const auto fresh = run_heuristic_call(model, refs, NeighborhoodMode::kMrens, {});
  EXPECT_TRUE(fresh.best_found);
  const auto tied = run_heuristic_call(model, refs, NeighborhoodMode::kMrens, {}, {}, -9.0);
  EXPECT_TRUE(tied.solution_found);
  EXPECT_FALSE(tied.best_found);
  const auto better = run_heuristic_call(model, refs, NeighborhoodMode::kMrens, {}, {}, -8.0);
  EXPECT_TRUE(better.best_found);
}

TEST(HeuristicCallTest, SolutionsSatisfyTheOriginalModel) {
  std::mt19937_64 rng(77);
  int found = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const MilpModel model =
        testing::random_model(rng, {.num_vars = 6, .num_rows = 3, .all_integer = trial % 2 == 0});
    const ReferenceSet refs = run_relax_and_cut(model);
    if (refs.status != RefGenStatus::kOk) continue;
    for (auto mode : {NeighborhoodMode::kRens, NeighborhoodMode::kMrens}) {
      const auto record = run_heuristic_call(model, refs, mode, {}, {.min_int_fixing = 0.0});
      EXPECT_TRUE(!record.best_found || record.solution_found);
      EXPECT_TRUE(!record.solution_found || record.executed);
      if (!record.solution_found) continue;
      ++found;
      EXPECT_TRUE(check_feasible(model, record.solution));
      EXPECT_NEAR(model.evaluate_objective(record.solution), *record.objective, 1e-12);
    }
  }
  EXPECT_GT(found, 30);
}

TEST(HeuristicCallTest, SingleReferenceMrensMatchesRens) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const MilpModel model = testing::random_model(rng, {.num_vars = 6, .num_rows = 3});
    const ReferenceSet refs = run_relax_and_cut(model, {.max_iterations = 0});
    ASSERT_EQ(refs.selected.size(), 1u);
    auto rens = run_heuristic_call(model, refs, NeighborhoodMode::kRens, {});
    auto mrens = run_heuristic_call(model, refs, NeighborhoodMode::kMrens, {});
    mrens.mode = rens.mode;
    EXPECT_TRUE(same_outcome(rens, mrens));
  }
}

}  // namespace
}  // namespace mrens
