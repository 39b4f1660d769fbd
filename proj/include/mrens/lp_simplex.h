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

// Bounded-variable primal simplex over a dense explicit basis inverse.
//
// The LP is augmented with one logical variable per row, s_i = a_i'x with
// bounds [b_i, +inf), so the equality system is [A | -I] (x, s) = 0. Variables
// 0..n-1 are structural and n..n+m-1 are the row logicals.

#ifndef MRENS_LP_SIMPLEX_H_
#define MRENS_LP_SIMPLEX_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mrens/model.h"

namespace mrens {

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

struct Basis {
  // One entry per structural and logical variable.
  std::vector<VarStatus> status;
  // basic_order[r] is the variable that is basic in tableau row r.
  std::vector<int> basic_order;

  friend bool operator==(const Basis&, const Basis&) = default;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  // Structural values followed by row logicals.
  std::vector<double> x;
  // Effective objective (the override when one is given), no offset.
  double objective_value = 0.0;
  Basis basis;
  // Reduced costs of the effective objective; zero on basic variables.
  std::vector<double> reduced_costs;
  int iterations = 0;
  bool warm_started = false;
  // A warm basis was supplied but could not be used.
  bool warm_start_rejected = false;
  // Meaningful for kIterationLimit: whether x is primal feasible.
  bool primal_feasible = false;
};

struct LpOptions {
  int iteration_limit = 50000;
  // Pivots without objective progress before Bland's rule is engaged.
  int bland_stall_threshold = 1000;
  int refactor_interval = 100;
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
};

struct LpInput {
  // Empty spans select the model's own objective and bounds.
  std::span<const double> objective;
  std::span<const double> lower;
  std::span<const double> upper;
  const Basis* warm_basis = nullptr;
};

// Solves the LP relaxation of `model`; integrality marks are ignored.
LpSolution solve_lp(const MilpModel& model, const LpInput& input = {},
                    const LpOptions& options = {});

// Dense inverse of a basis matrix of [A | -I].
class BasisInverse {
 public:
  // Empty when the basis is structurally invalid or numerically singular.
  static std::optional<BasisInverse> factorize(const MilpModel& model,
                                               const Basis& basis);

  int size() const { return m_; }
  // Row r of B^-1.
  std::span<const double> row(int r) const {
    return {inverse_.data() + static_cast<std::size_t>(r) * m_,
            static_cast<std::size_t>(m_)};
  }

 private:
  BasisInverse(int m, std::vector<double> inverse)
      : m_(m), inverse_(std::move(inverse)) {}

  int m_ = 0;
  std::vector<double> inverse_;
};

// x_B(r) + sum_j coefficient_j * shift_j = rhs, where shift_j is the distance
// of nonbasic variable j from its current value in the solution: x_j - v_j at
// a lower bound (or free) and v_j - x_j at an upper bound.
struct TableauRow {
  int basic_var = -1;
  std::vector<int> nonbasic_vars;
  std::vector<double> coefficients;
  double rhs = 0.0;
};

TableauRow tableau_row(const MilpModel& model, const LpSolution& solution,
                       int basic_row);
TableauRow tableau_row(const MilpModel& model, const LpSolution& solution,
                       const BasisInverse& inverse, int basic_row);

}  // namespace mrens

#endif  // MRENS_LP_SIMPLEX_H_
