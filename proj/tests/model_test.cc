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

#include "mrens/model.h"

#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace mrens {
namespace {

// {x1 + x2 >= 1, x in [0,1]^2, both integer}.
MilpModel unit_cover() {
  ModelBuilder b;
  b.add_variable(0, 1, 1, true);
  b.add_variable(0, 1, 1, true);
  b.add_row({{0, 1.0}, {1, 1.0}}, RowSense::kGreaterEqual, 1.0);
  return b.build();
}

TEST(ModelTest, RelaxationDropsOnlyIntegrality) {
  ModelBuilder b;
  b.add_variable(0, 4, 1.5);
  b.add_variable(-kInfinity, 2, -1.0);
  b.add_variable(0.2, 3.7, 2.0, true);
  b.add_row({{0, 1.0}, {2, -2.0}}, RowSense::kLessEqual, 3.0);
  const MilpModel model = b.build();
  const MilpModel relaxed = lp_relaxation(model);
  EXPECT_TRUE(relaxed.integer_vars().empty());
  EXPECT_EQ(relaxed.objective(), model.objective());
  EXPECT_EQ(relaxed.lower(), model.lower());
  EXPECT_EQ(relaxed.upper(), model.upper());
  ASSERT_EQ(relaxed.num_rows(), model.num_rows());
  EXPECT_EQ(relaxed.row(0).entries, model.row(0).entries);
  EXPECT_EQ(relaxed.row(0).rhs, model.row(0).rhs);

  const MilpModel twice = lp_relaxation(relaxed);
  EXPECT_EQ(twice.lower(), relaxed.lower());
  EXPECT_TRUE(twice.integer_vars().empty());

  const MilpModel cover = lp_relaxation(unit_cover());
  EXPECT_TRUE(cover.integer_vars().empty());
}

TEST(ModelTest, IntegerBoundsRoundInward) {
  ModelBuilder b;
  b.add_variable(0.2, 3.7, 0.0, true);
  const MilpModel model = b.build();
  EXPECT_EQ(model.lower()[0], 1.0);
  EXPECT_EQ(model.upper()[0], 3.0);
}

TEST(ModelTest, RejectsInvertedBounds) {
  ModelBuilder b;
  b.add_variable(2.0, 1.0, 0.0);
  EXPECT_THROW(b.build(), InvalidModel);

  ModelBuilder c;
  c.add_variable(0.2, 0.8, 0.0, true);
  EXPECT_THROW(c.build(), InvalidModel);
}

TEST(ModelTest, RowsAreCanonicalized) {
  ModelBuilder b;
  b.add_variable(0, 1, 0);
  b.add_variable(0, 1, 0);
  b.add_row({{1, 2.0}, {0, 1.0}, {1, -2.0}, {0, 3.0}}, RowSense::kGreaterEqual, 1.0);
  const MilpModel model = b.build();
  ASSERT_EQ(model.row(0).entries.size(), 1u);
  EXPECT_EQ(model.row(0).entries[0].index, 0);
  EXPECT_EQ(model.row(0).entries[0].value, 4.0);
  EXPECT_TRUE(model.column(1).empty());
}

TEST(ModelTest, EqualityBecomesTwoRows) {
  ModelBuilder b;
  b.add_variable(0, 5, 0);
  b.add_row({{0, 2.0}}, RowSense::kEqual, 4.0, "eq");
  b.add_row({{0, 1.0}}, RowSense::kLessEqual, 3.0, "le");
  const MilpModel model = b.build();
  ASSERT_EQ(model.num_rows(), 3);
  EXPECT_EQ(model.row(0).rhs, 4.0);
  EXPECT_EQ(model.row(1).rhs, -4.0);
  EXPECT_EQ(model.row(1).entries[0].value, -2.0);
  EXPECT_EQ(model.row(2).rhs, -3.0);
}

TEST(ModelTest, CheckFeasible) {
  const MilpModel model = unit_cover();
  EXPECT_TRUE(check_feasible(model, std::vector<double>{1, 0}));
  EXPECT_FALSE(check_feasible(model, std::vector<double>{0.5, 0.5}));
  EXPECT_FALSE(check_feasible(model, std::vector<double>{0, 0}));
  EXPECT_TRUE(check_feasible(lp_relaxation(model), std::vector<double>{0.5, 0.5}));
  EXPECT_THROW(check_feasible(model, std::vector<double>{1}), ContractViolation);
}

TEST(ModelTest, IsIntegral) {
  const std::vector<double> x{2.0, 0.3};
  EXPECT_TRUE(is_integral(x, std::vector<int>{0}));
  EXPECT_FALSE(is_integral(x, std::vector<int>{0, 1}));
  EXPECT_TRUE(is_integral(std::vector<double>{1.9999995}, std::vector<int>{0}, 1e-6));
}

TEST(ModelTest, SolutionObjectiveAndKind) {
  ModelBuilder b;
  b.add_variable(0, 3, 0.1, true);
  b.add_variable(0, 3, 0.7);
  const MilpModel model = b.build();
  const Solution s = make_solution(model, std::vector<double>{2.0, 0.3, 99.0});
  EXPECT_EQ(s.values.size(), 2u);
  EXPECT_NEAR(s.objective_value, 0.1 * 2.0 + 0.7 * 0.3, 1e-9);
  EXPECT_EQ(s.kind, SolutionKind::kIntegral);
  const Solution f = make_solution(model, std::vector<double>{1.5, 0.0});
  EXPECT_EQ(f.kind, SolutionKind::kFractional);
}

TEST(ModelTest, RelaxationNeverCutsOffMilpPoints) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const MilpModel model = testing::random_model(rng, {.num_vars = 3, .num_rows = 2});
    const MilpModel relaxed = lp_relaxation(model);
    std::uniform_real_distribution<double> u(-0.5, 3.5);
    testing::for_each_box_point(model, [&](const std::vector<double>& x) {
      if (check_feasible(model, x)) EXPECT_TRUE(check_feasible(relaxed, x));
    });
    for (int k = 0; k < 20; ++k) {
      std::vector<double> x{u(rng), u(rng), u(rng)};
      if (check_feasible(model, x)) EXPECT_TRUE(check_feasible(relaxed, x));
    }
  }
}

}  // namespace
}  // namespace mrens
