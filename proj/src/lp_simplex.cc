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

#include "mrens/lp_simplex.h"

#include <algorithm>
#include <cmath>
#include <utility>

namespace mrens {

namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kSingularTolerance = 1e-11;
constexpr double kDropTolerance = 1e-12;
constexpr int kMaxVerifyRetries = 5;

// Calls f(row, value) for every nonzero of column j of [A | -I].
template <class F>
void for_each_in_column(const MilpModel& model, int j, F&& f) {
  const int n = model.num_vars();
  if (j < n) {
    for (const ColumnEntry& e : model.column(j)) f(e.row, e.value);
  } else {
    f(j - n, -1.0);
  }
}

// Inverts the basis matrix whose column r is column basic_order[r] of
// [A | -I]. The result is row-major: row r belongs to tableau row r.
bool invert_basis(const MilpModel& model, std::span<const int> basic_order,
                  std::vector<double>& inverse) {
  const int m = model.num_rows();
  const auto mm = static_cast<std::size_t>(m);
  // Augmented [B | I], row-major, reduced to [I | B^-1].
  std::vector<double> work(mm * 2 * mm, 0.0);
  auto at = [&](int i, int j) -> double& {
    return work[static_cast<std::size_t>(i) * 2 * mm + j];
  };
  for (int r = 0; r < m; ++r) {
    for_each_in_column(model, basic_order[r],
                       [&](int row, double value) { at(row, r) = value; });
  }
  for (int i = 0; i < m; ++i) at(i, m + i) = 1.0;

  for (int col = 0; col < m; ++col) {
    int pivot = -1;
    double best = kSingularTolerance;
    for (int i = col; i < m; ++i) {
      if (std::abs(at(i, col)) > best) {
        best = std::abs(at(i, col));
        pivot = i;
      }
    }
    if (pivot < 0) return false;
    if (pivot != col) {
      for (int j = 0; j < 2 * m; ++j) std::swap(at(pivot, j), at(col, j));
    }
    const double inv_pivot = 1.0 / at(col, col);
    for (int j = 0; j < 2 * m; ++j) at(col, j) *= inv_pivot;
    for (int i = 0; i < m; ++i) {
      if (i == col) continue;
      const double factor = at(i, col);
      if (factor == 0.0) continue;
      for (int j = col; j < 2 * m; ++j) at(i, j) -= factor * at(col, j);
    }
  }
  // Row i of the reduced system gives B^-1 row for basis position i.
  inverse.assign(mm * mm, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) inverse[static_cast<std::size_t>(i) * mm + j] = at(i, m + j);
  }
  return true;
}

bool basis_shape_ok(const Basis& basis, int n, int m) {
  if (static_cast<int>(basis.status.size()) != n + m ||
      static_cast<int>(basis.basic_order.size()) != m) {
    return false;
  }
  std::vector<char> seen(n + m, 0);
  for (int v : basis.basic_order) {
    if (v < 0 || v >= n + m || seen[v] || basis.status[v] != VarStatus::kBasic) {
      return false;
    }
    seen[v] = 1;
  }
  int basic = 0;
  for (VarStatus s : basis.status) basic += s == VarStatus::kBasic;
  return basic == m;
}

class Simplex {
 public:
  Simplex(const MilpModel& model, const LpInput& input, const LpOptions& options)
      : model_(model),
        options_(options),
        n_(model.num_vars()),
        m_(model.num_rows()),
        total_(n_ + m_) {
    lower_.resize(total_);
    upper_.resize(total_);
    cost_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lower_[j] = input.lower.empty() ? model.lower()[j] : input.lower[j];
      upper_[j] = input.upper.empty() ? model.upper()[j] : input.upper[j];
      cost_[j] = input.objective.empty() ? model.objective()[j] : input.objective[j];
    }
    for (int i = 0; i < m_; ++i) {
      lower_[n_ + i] = model.row(i).rhs;
      upper_[n_ + i] = kInfinity;
    }
    warm_ = input.warm_basis;
  }

  LpSolution run();

 private:
  void cold_basis();
  bool load_warm_basis(const Basis& basis);
  void place_nonbasic(int j);
  bool refactor();
  void compute_basic_values();
  // Fills phase_cost_; returns the total bound infeasibility of basics.
  double phase_costs();
  void compute_duals(const std::vector<double>& costs);
  double reduced_cost(int j, const std::vector<double>& costs) const;
  int price(const std::vector<double>& costs, double& d_entering) const;
  void compute_column(int q);
  void pivot(int q, int r);
  LpSolution finish(LpStatus status);

  const MilpModel& model_;
  const LpOptions options_;
  const int n_;
  const int m_;
  const int total_;
  const Basis* warm_ = nullptr;

  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<double> x_;
  std::vector<VarStatus> status_;
  std::vector<int> basic_order_;
  std::vector<double> binv_;
  std::vector<double> phase_cost_;
  std::vector<double> duals_;
  std::vector<double> alpha_;

  bool bland_ = false;
  int iterations_ = 0;
  bool warm_started_ = false;
  bool warm_rejected_ = false;
};

void Simplex::place_nonbasic(int j) {
  const bool has_lower = std::isfinite(lower_[j]);
  const bool has_upper = std::isfinite(upper_[j]);
  VarStatus& s = status_[j];
  if (s == VarStatus::kAtLower && !has_lower) s = VarStatus::kFree;
  if (s == VarStatus::kAtUpper && !has_upper) s = VarStatus::kFree;
  if (s == VarStatus::kFree) {
    if (has_lower) {
      s = VarStatus::kAtLower;
    } else if (has_upper) {
      s = VarStatus::kAtUpper;
    }
  }
  switch (s) {
    case VarStatus::kAtLower: x_[j] = lower_[j]; break;
    case VarStatus::kAtUpper: x_[j] = upper_[j]; break;
    case VarStatus::kFree: x_[j] = 0.0; break;
    case VarStatus::kBasic: break;
  }
}

void Simplex::cold_basis() {
  status_.assign(total_, VarStatus::kFree);
  basic_order_.resize(m_);
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  for (int i = 0; i < m_; ++i) {
    status_[n_ + i] = VarStatus::kBasic;
    basic_order_[i] = n_ + i;
  }
  // B = -I.
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = -1.0;
}

bool Simplex::load_warm_basis(const Basis& basis) {
  if (!basis_shape_ok(basis, n_, m_)) return false;
  status_ = basis.status;
  basic_order_ = basis.basic_order;
  if (!invert_basis(model_, basic_order_, binv_)) return false;
  for (int j = 0; j < total_; ++j) {
    if (status_[j] != VarStatus::kBasic) place_nonbasic(j);
  }
  return true;
}

bool Simplex::refactor() { return invert_basis(model_, basic_order_, binv_); }

void Simplex::compute_basic_values() {
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::kBasic || x_[j] == 0.0) continue;
    const double value = x_[j];
    for_each_in_column(model_, j, [&](int row, double a) { rhs[row] += a * value; });
  }
  for (int r = 0; r < m_; ++r) {
    const double* inv_row = binv_.data() + static_cast<std::size_t>(r) * m_;
    double value = 0.0;
    for (int i = 0; i < m_; ++i) value -= inv_row[i] * rhs[i];
    x_[basic_order_[r]] = value;
  }
}

double Simplex::phase_costs() {
  phase_cost_.assign(total_, 0.0);
  double infeasibility = 0.0;
  const double tol = options_.primal_tolerance;
  for (int r = 0; r < m_; ++r) {
    const int v = basic_order_[r];
    if (x_[v] < lower_[v] - tol) {
      phase_cost_[v] = -1.0;
      infeasibility += lower_[v] - x_[v];
    } else if (x_[v] > upper_[v] + tol) {
      phase_cost_[v] = 1.0;
      infeasibility += x_[v] - upper_[v];
    }
  }
  return infeasibility;
}

void Simplex::compute_duals(const std::vector<double>& costs) {
  duals_.assign(m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    const double c = costs[basic_order_[r]];
    if (c == 0.0) continue;
    const double* inv_row = binv_.data() + static_cast<std::size_t>(r) * m_;
    for (int i = 0; i < m_; ++i) duals_[i] += c * inv_row[i];
  }
}

double Simplex::reduced_cost(int j, const std::vector<double>& costs) const {
  double d = costs[j];
  for_each_in_column(model_, j, [&](int row, double a) { d -= duals_[row] * a; });
  return d;
}

int Simplex::price(const std::vector<double>& costs, double& d_entering) const {
  const double tol = options_.dual_tolerance;
  int best = -1;
  double best_score = 0.0;
  for (int j = 0; j < total_; ++j) {
    const VarStatus s = status_[j];
    if (s == VarStatus::kBasic || lower_[j] == upper_[j]) continue;
    const double d = reduced_cost(j, costs);
    double score = 0.0;
    if ((s == VarStatus::kAtLower || s == VarStatus::kFree) && d < -tol) score = -d;
    if ((s == VarStatus::kAtUpper || s == VarStatus::kFree) && d > tol) score = d;
    if (score <= 0.0) continue;
    if (bland_) {
      d_entering = d;
      return j;
    }
    if (score > best_score) {
      best_score = score;
      best = j;
      d_entering = d;
    }
  }
  return best;
}

void Simplex::compute_column(int q) {
  alpha_.assign(m_, 0.0);
  for_each_in_column(model_, q, [&](int row, double a) {
    for (int r = 0; r < m_; ++r) {
      alpha_[r] += binv_[static_cast<std::size_t>(r) * m_ + row] * a;
    }
  });
}

void Simplex::pivot(int q, int r) {
  double* pivot_row = binv_.data() + static_cast<std::size_t>(r) * m_;
  const double inv_pivot = 1.0 / alpha_[r];
  for (int i = 0; i < m_; ++i) pivot_row[i] *= inv_pivot;
  for (int k = 0; k < m_; ++k) {
    if (k == r || alpha_[k] == 0.0) continue;
    double* row = binv_.data() + static_cast<std::size_t>(k) * m_;
    const double factor = alpha_[k];
    for (int i = 0; i < m_; ++i) row[i] -= factor * pivot_row[i];
  }
  basic_order_[r] = q;
  status_[q] = VarStatus::kBasic;
}

LpSolution Simplex::finish(LpStatus status) {
  LpSolution solution;
  solution.status = status;
  solution.iterations = iterations_;
  solution.warm_started = warm_started_;
  solution.warm_start_rejected = warm_rejected_;
  if (x_.empty()) return solution;
  solution.x = x_;
  double objective = 0.0;
  for (int j = 0; j < n_; ++j) objective += cost_[j] * x_[j];
  solution.objective_value = objective;
  solution.basis.status = status_;
  solution.basis.basic_order = basic_order_;
  compute_duals(cost_);
  solution.reduced_costs.assign(total_, 0.0);
  for (int j = 0; j < total_; ++j) {
    if (status_[j] != VarStatus::kBasic) solution.reduced_costs[j] = reduced_cost(j, cost_);
  }
  solution.primal_feasible = phase_costs() == 0.0;
  return solution;
}

LpSolution Simplex::run() {
  for (int j = 0; j < n_; ++j) {
    if (lower_[j] > upper_[j] + options_.primal_tolerance) {
      return finish(LpStatus::kInfeasible);
    }
  }
  x_.assign(total_, 0.0);
  if (warm_ != nullptr) {
    warm_started_ = load_warm_basis(*warm_);
    warm_rejected_ = !warm_started_;
  }
  if (!warm_started_) cold_basis();
  compute_basic_values();

  int since_refactor = 0;
  int stall = 0;
  int verify_retries = 0;
  bool last_phase_one = true;
  double best_progress = kInfinity;

  while (true) {
    if (iterations_ >= options_.iteration_limit) {
      return finish(LpStatus::kIterationLimit);
    }
    if (since_refactor >= options_.refactor_interval) {
      if (!refactor()) {
        // Accumulated error made the basis singular; restart from slacks.
        cold_basis();
      }
      compute_basic_values();
      since_refactor = 0;
    }

    const double infeasibility = phase_costs();
    const bool phase_one = infeasibility > 0.0;
    const std::vector<double>& costs = phase_one ? phase_cost_ : cost_;
    double progress = infeasibility;
    if (!phase_one) {
      progress = 0.0;
      for (int j = 0; j < n_; ++j) progress += cost_[j] * x_[j];
    }
    if (phase_one != last_phase_one) {
      best_progress = kInfinity;
      stall = 0;
      bland_ = false;
      last_phase_one = phase_one;
    }
    if (progress < best_progress - 1e-12 * (1.0 + std::abs(best_progress))) {
      best_progress = progress;
      stall = 0;
      bland_ = false;
    } else if (++stall >= options_.bland_stall_threshold) {
      bland_ = true;
    }

    compute_duals(costs);
    double d_entering = 0.0;
    const int q = price(costs, d_entering);
    if (q < 0) {
      // No improving column. Confirm on a fresh factorization.
      if (verify_retries < kMaxVerifyRetries && since_refactor > 0) {
        ++verify_retries;
        if (!refactor()) cold_basis();
        compute_basic_values();
        since_refactor = 0;
        continue;
      }
      return finish(phase_one ? LpStatus::kInfeasible : LpStatus::kOptimal);
    }

    const double direction = d_entering < 0.0 ? 1.0 : -1.0;
    compute_column(q);

    // Ratio test over the basic variables and the entering variable's range.
    const double tol = options_.primal_tolerance;
    double theta = upper_[q] - lower_[q];
    int leaving = -1;
    bool leaving_to_upper = false;
    auto candidate_step = [&](int r, bool& to_upper) -> double {
      const double rate = -direction * alpha_[r];
      if (std::abs(alpha_[r]) < kPivotTolerance) return kInfinity;
      const int v = basic_order_[r];
      const double value = x_[v];
      if (phase_one && value < lower_[v] - tol) {
        if (rate <= 0.0) return kInfinity;
        to_upper = false;
        return (lower_[v] - value) / rate;
      }
      if (phase_one && value > upper_[v] + tol) {
        if (rate >= 0.0) return kInfinity;
        to_upper = true;
        return (upper_[v] - value) / rate;
      }
      if (rate > 0.0 && std::isfinite(upper_[v])) {
        to_upper = true;
        return std::max(0.0, (upper_[v] - value) / rate);
      }
      if (rate < 0.0 && std::isfinite(lower_[v])) {
        to_upper = false;
        return std::max(0.0, (lower_[v] - value) / rate);
      }
      return kInfinity;
    };
    double min_ratio = kInfinity;
    for (int r = 0; r < m_; ++r) {
      bool to_upper = false;
      min_ratio = std::min(min_ratio, candidate_step(r, to_upper));
    }
    if (min_ratio < theta) {
      // Among near-ties prefer the largest pivot (or the lowest index under
      // Bland's rule).
      const double slack = 1e-12 * std::max(1.0, min_ratio);
      double best_pivot = 0.0;
      for (int r = 0; r < m_; ++r) {
        bool to_upper = false;
        const double step = candidate_step(r, to_upper);
        if (step > min_ratio + slack) continue;
        const bool better =
            bland_ ? (leaving < 0 || basic_order_[r] < basic_order_[leaving])
                   : std::abs(alpha_[r]) > best_pivot;
        if (better) {
          leaving = r;
          leaving_to_upper = to_upper;
          best_pivot = std::abs(alpha_[r]);
          theta = step;
        }
      }
    }

    if (!std::isfinite(theta)) {
      if (!phase_one) return finish(LpStatus::kUnbounded);
      // Only reachable through numerical trouble in phase one.
      if (verify_retries < kMaxVerifyRetries) {
        ++verify_retries;
        if (!refactor()) cold_basis();
        compute_basic_values();
        since_refactor = 0;
        continue;
      }
      return finish(LpStatus::kInfeasible);
    }

    ++iterations_;
    const double step = direction * theta;
    if (step != 0.0) {
      x_[q] += step;
      for (int r = 0; r < m_; ++r) x_[basic_order_[r]] -= step * alpha_[r];
    }
    if (leaving < 0) {
      // Bound flip of the entering variable.
      status_[q] = direction > 0.0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
      x_[q] = direction > 0.0 ? upper_[q] : lower_[q];
      continue;
    }
    const int out = basic_order_[leaving];
    status_[out] = leaving_to_upper ? VarStatus::kAtUpper : VarStatus::kAtLower;
    x_[out] = leaving_to_upper ? upper_[out] : lower_[out];
    pivot(q, leaving);
    ++since_refactor;
  }
}

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

LpSolution solve_lp(const MilpModel& model, const LpInput& input,
                    const LpOptions& options) {
  const auto n = static_cast<std::size_t>(model.num_vars());
  if ((!input.objective.empty() && input.objective.size() != n) ||
      (!input.lower.empty() && input.lower.size() != n) ||
      (!input.upper.empty() && input.upper.size() != n)) {
    throw ContractViolation("LP input vectors do not match the model size");
  }
  Simplex simplex(model, input, options);
  return simplex.run();
}

std::optional<BasisInverse> BasisInverse::factorize(const MilpModel& model,
                                                    const Basis& basis) {
  if (!basis_shape_ok(basis, model.num_vars(), model.num_rows())) {
    return std::nullopt;
  }
  std::vector<double> inverse;
  if (!invert_basis(model, basis.basic_order, inverse)) return std::nullopt;
  return BasisInverse(model.num_rows(), std::move(inverse));
}

TableauRow tableau_row(const MilpModel& model, const LpSolution& solution,
                       int basic_row) {
  if (solution.status != LpStatus::kOptimal) {
    throw ContractViolation("tableau rows require an optimal LP solution");
  }
  auto inverse = BasisInverse::factorize(model, solution.basis);
  if (!inverse) throw ContractViolation("solution basis cannot be factorized");
  return tableau_row(model, solution, *inverse, basic_row);
}

TableauRow tableau_row(const MilpModel& model, const LpSolution& solution,
                       const BasisInverse& inverse, int basic_row) {
  const int n = model.num_vars();
  const int m = model.num_rows();
  if (solution.status != LpStatus::kOptimal) {
    throw ContractViolation("tableau rows require an optimal LP solution");
  }
  if (basic_row < 0 || basic_row >= m || inverse.size() != m) {
    throw ContractViolation("tableau row index out of range");
  }
  const std::span<const double> rho = inverse.row(basic_row);

  // rho' A over the structural columns.
  std::vector<double> combined(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (rho[i] == 0.0) continue;
    for (const SparseEntry& e : model.row(i).entries) combined[e.index] += rho[i] * e.value;
  }

  TableauRow row;
  row.basic_var = solution.basis.basic_order[basic_row];
  row.rhs = solution.x[row.basic_var];
  for (int j = 0; j < n + m; ++j) {
    const VarStatus s = solution.basis.status[j];
    if (s == VarStatus::kBasic) continue;
    double coefficient = j < n ? combined[j] : -rho[j - n];
    if (s == VarStatus::kAtUpper) coefficient = -coefficient;
    if (std::abs(coefficient) <= kDropTolerance) continue;
    row.nonbasic_vars.push_back(j);
    row.coefficients.push_back(coefficient);
  }
  return row;
}

}  // namespace mrens
