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

#include "mrens/neighborhood.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace mrens {
namespace {

// One integer variable on [lo, hi] and no rows.
MilpModel single_var(double lo = 0, double hi = 10) {
  ModelBuilder b;
  b.add_variable(lo, hi, 1, true);
  return b.build();
}

std::pair<double, double> rens1(double v) {
  const auto bounds = rens_bounds(single_var(), std::vector<double>{v});
  return {bounds.var_lower[0], bounds.var_upper[0]};
}

std::pair<double, double> mrens1(std::vector<double> values) {
  std::vector<std::vector<double>> refs;
  for (double v : values) refs.push_back({v});
  const auto bounds = mrens_bounds(single_var(), refs);
  return {bounds.var_lower[0], bounds.var_upper[0]};
}

using Interval = std::pair<double, double>;

TEST(NeighborhoodTest, RensIntervals) {
  EXPECT_EQ(rens1(2.5), Interval(2, 3));
  EXPECT_EQ(rens1(3.0), Interval(3, 3));
  EXPECT_EQ(rens1(0.9999999), Interval(1, 1));
}

TEST(NeighborhoodTest, MrensIntervals) {
  EXPECT_EQ(mrens1({2.3, 2.7}), Interval(2, 3));
  EXPECT_EQ(mrens1({1.2, 2.2}), Interval(2, 2));
  EXPECT_EQ(mrens1({2.4}), Interval(2, 3));
  EXPECT_EQ(mrens1({2.4}), rens1(2.4));
  EXPECT_EQ(mrens1({1.5, 1.7, 2.6}), Interval(2, 2));
  EXPECT_EQ(mrens1({0.5, 3.5, 2.0}), Interval(1, 3));
}

TEST(NeighborhoodTest, IntersectsWithModelBounds) {
  // Values within tolerance outside the box snap onto the bound.
  const MilpModel model = single_var(1, 4);
  const auto bounds = rens_bounds(model, std::vector<double>{4.0000005});
  EXPECT_EQ(bounds.var_lower[0], 4.0);
  EXPECT_EQ(bounds.var_upper[0], 4.0);
}

TEST(NeighborhoodTest, RejectsBadReferences) {
  const MilpModel model = single_var(0, 3);
  EXPECT_THROW(rens_bounds(model, std::vector<double>{3.5}), ContractViolation);
  EXPECT_THROW(rens_bounds(model, std::vector<double>{NAN}), ContractViolation);
  EXPECT_THROW(mrens_bounds(model, std::vector<std::vector<double>>{}), ContractViolation);
  EXPECT_THROW(mrens_bounds(model, std::vector<std::vector<double>>{{1}, {1}, {1}, {1}}),
               ContractViolation);
}

TEST(NeighborhoodTest, FixingRateAndGate) {
  ModelBuilder b;
  for (int j = 0; j < 4; ++j) b.add_variable(0, 5, 0, true);
  b.add_variable(0, 1, 0);
  const MilpModel model = b.build();
  NeighborhoodBounds bounds;
  bounds.var_lower = {1, 2, 3, 0};
  bounds.var_upper = {1, 2, 3, 1};
  bounds.fixed_count = 3;
  EXPECT_DOUBLE_EQ(fixing_rate(bounds, model), 0.75);
  bounds.fixed_count = 4;
  EXPECT_DOUBLE_EQ(fixing_rate(bounds, model), 1.0);
  bounds.fixed_count = 0;
  EXPECT_DOUBLE_EQ(fixing_rate(bounds, model), 0.0);
  bounds.fixed_count = 2;
  EXPECT_TRUE(execution_gate(bounds, model, 0.5));
  EXPECT_FALSE(execution_gate(bounds, model, 0.51));

  ModelBuilder continuous;
  continuous.add_variable(0, 1, 0);
  EXPECT_DOUBLE_EQ(fixing_rate({}, continuous.build()), 1.0);
}

TEST(NeighborhoodTest, GateThresholdExamples) {
  // 100 integer variables make the rates exact.
  ModelBuilder b;
  for (int j = 0; j < 100; ++j) b.add_variable(0, 1, 0, true);
  const MilpModel model = b.build();
  NeighborhoodBounds bounds;
  bounds.fixed_count = 73;
  EXPECT_TRUE(execution_gate(bounds, model, 0.5));
  bounds.fixed_count = 49;
  EXPECT_FALSE(execution_gate(bounds, model, 0.5));
  bounds.fixed_count = 50;
  EXPECT_TRUE(execution_gate(bounds, model, 0.5));
}

TEST(NeighborhoodTest, SubMilpReplacesOnlyIntegerBounds) {
  ModelBuilder b;
  b.add_variable(0, 5, 1, true);
  b.add_variable(-1, 7, 1);
  b.add_row({{0, 1.0}, {1, 1.0}}, RowSense::kGreaterEqual, 1.0);
  const MilpModel model = b.build();
  const auto bounds = rens_bounds(model, std::vector<double>{2.0, 0.5});
  const MilpModel sub = build_submilp(model, bounds);
  EXPECT_EQ(sub.lower(), (std::vector<double>{2.0, -1.0}));
  EXPECT_EQ(sub.upper(), (std::vector<double>{2.0, 7.0}));
  EXPECT_EQ(sub.row(0).entries, model.row(0).entries);
  EXPECT_EQ(sub.integer_vars(), model.integer_vars());
}

TEST(NeighborhoodTest, FullyFractionalBinaryReferenceKeepsTheModel) {
  ModelBuilder b;
  for (int j = 0; j < 3; ++j) b.add_variable(0, 1, -1, true);
  b.add_row({{0, 1.0}, {1, 1.0}, {2, 1.0}}, RowSense::kLessEqual, 1.5);
  const MilpModel model = b.build();
  const auto bounds = rens_bounds(model, std::vector<double>{0.5, 0.5, 0.5});
  EXPECT_EQ(bounds.fixed_count, 0);
  const MilpModel sub = build_submilp(model, bounds);
  EXPECT_EQ(sub.lower(), model.lower());
  EXPECT_EQ(sub.upper(), model.upper());
}

// Integer points of the sub-MILP are exactly the feasible points of the
// original inside the per-variable boxes.
TEST(NeighborhoodTest, SubMilpFeasibleSetMatchesEnumeration) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    const MilpModel model = testing::random_model(rng, {.num_vars = 4, .num_rows = 2});
    // Convex combinations of feasible integer points are LP feasible.
    const auto points = testing::enumerate_integer(model, true).feasible_points;
    ASSERT_FALSE(points.empty());
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> refs;
    while (refs.size() < 3) {
      const auto& a = points[pick(rng)];
      const auto& b = points[pick(rng)];
      const double t = unit(rng);
      std::vector<double> x(4);
      for (int j = 0; j < 4; ++j) x[j] = t * a[j] + (1.0 - t) * b[j];
      refs.push_back(x);
    }
    const auto bounds = mrens_bounds(model, refs);
    const MilpModel sub = build_submilp(model, bounds);
    const auto in_sub = testing::enumerate_integer(sub, true).feasible_points;
    std::vector<std::vector<double>> expected;
    testing::for_each_box_point(model, [&](const std::vector<double>& x) {
      if (testing::row_violation(model, x) > 1e-9) return;
      for (int j = 0; j < 4; ++j) {
        if (x[j] < bounds.var_lower[j] || x[j] > bounds.var_upper[j]) return;
      }
      expected.push_back(x);
    });
    std::sort(expected.begin(), expected.end());
    auto actual = in_sub;
    std::sort(actual.begin(), actual.end());
    EXPECT_EQ(actual, expected);
  }
}

TEST(NeighborhoodTest, IntervalProperties) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  std::uniform_int_distribution<int> count(1, 3);
  for (int trial = 0; trial < 20000; ++trial) {
    std::vector<double> values(count(rng));
    for (double& v : values) v = value(rng);
    const auto [lo, hi] = mrens_interval(values);
    EXPECT_LE(lo, hi);
    EXPECT_EQ(lo, std::round(lo));
    EXPECT_EQ(hi, std::round(hi));

    // Monotone while the spread stays below one.
    std::vector<double> more = values;
    more.push_back(value(rng));
    const auto [mn, mx] = std::minmax_element(more.begin(), more.end());
    if (*mx - *mn < 1.0) {
      const auto [lo2, hi2] = mrens_interval(more);
      EXPECT_LE(lo2, lo);
      EXPECT_GE(hi2, hi);
    }
  }
}

TEST(NeighborhoodTest, FixedCountMatchesRecount) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    ModelBuilder b;
    for (int j = 0; j < 6; ++j) b.add_variable(0, 4, 0, j % 3 != 2);
    const MilpModel model = b.build();
    std::vector<std::vector<double>> refs(2, std::vector<double>(6));
    for (auto& x : refs) {
      for (double& v : x) v = unit(rng) < 0.4 ? std::floor(unit(rng) * 5) : unit(rng) * 4;
    }
    const auto bounds = mrens_bounds(model, refs);
    int fixed = 0;
    for (std::size_t k = 0; k < bounds.var_lower.size(); ++k) {
      fixed += bounds.var_lower[k] == bounds.var_upper[k];
      EXPECT_GE(bounds.var_lower[k], model.lower()[model.integer_vars()[k]]);
      EXPECT_LE(bounds.var_upper[k], model.upper()[model.integer_vars()[k]]);
    }
    EXPECT_EQ(bounds.fixed_count, fixed);
  }
}

}  // namespace
}  // namespace mrens
