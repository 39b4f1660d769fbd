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

#ifndef MRENS_MODEL_H_
#define MRENS_MODEL_H_

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrens {

// Infinite bounds are stored as IEEE infinities, never as large finite values.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline constexpr double kFeasibilityTolerance = 1e-6;
inline constexpr double kIntegralityTolerance = 1e-6;
inline constexpr double kObjectiveTolerance = 1e-9;

// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised when a model fails its construction invariants.
class InvalidModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SparseEntry {
  int index = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};
using SparseVector = std::vector<SparseEntry>;

// One constraint row in `entries . x >= rhs` orientation.
struct Row {
  SparseVector entries;
  double rhs = 0.0;
  std::string name;
};

// Column-major view of the constraint matrix; built once per model.
struct ColumnEntry {
  int row = 0;
  double value = 0.0;
};

// min c'x  s.t.  Ax >= b,  l <= x <= u,  x_j integral for j in the integer set.
//
// Immutable after construction. The constructor canonicalizes rows (sorted
// indices, merged duplicates, no explicit zeros) and rounds the bounds of
// integer variables inward.
class MilpModel {
 public:
  MilpModel() = default;
  MilpModel(std::vector<double> objective, std::vector<Row> rows,
            std::vector<double> lower, std::vector<double> upper,
            std::vector<int> integer_vars,
            std::vector<std::string> var_names = {},
            double objective_offset = 0.0, std::string name = {});

  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_integer() const { return static_cast<int>(integer_vars_.size()); }

  const std::string& name() const { return name_; }
  const std::vector<double>& objective() const { return objective_; }
  double objective_offset() const { return objective_offset_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Row& row(int i) const { return rows_[i]; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  // Sorted ascending.
  const std::vector<int>& integer_vars() const { return integer_vars_; }
  bool is_integer(int j) const { return is_integer_[j] != 0; }
  const std::vector<std::string>& var_names() const { return var_names_; }
  const std::vector<ColumnEntry>& column(int j) const { return columns_[j]; }

  // Copy with the given bounds; integer bounds are normalized again.
  MilpModel with_bounds(std::vector<double> lower,
                        std::vector<double> upper) const;
  MilpModel with_objective(std::vector<double> objective) const;
  MilpModel with_integer_vars(std::vector<int> integer_vars) const;

  // c'x, without the constant offset.
  double evaluate_objective(std::span<const double> x) const;
  double row_activity(int i, std::span<const double> x) const;

 private:
  void canonicalize();

  std::string name_;
  std::vector<double> objective_;
  double objective_offset_ = 0.0;
  std::vector<Row> rows_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<int> integer_vars_;
  std::vector<char> is_integer_;
  std::vector<std::string> var_names_;
  std::vector<std::vector<ColumnEntry>> columns_;
};

enum class RowSense { kGreaterEqual, kLessEqual, kEqual };

// Incremental construction with automatic `>=` normalization. Equalities and
// ranged rows become two rows.
class ModelBuilder {
 public:
  int add_variable(double lower, double upper, double objective,
                   bool integer = false, std::string name = {});
  void add_row(SparseVector entries, RowSense sense, double rhs,
               std::string name = {});
  // lo <= entries . x <= hi; either side may be infinite.
  void add_ranged_row(const SparseVector& entries, double lo, double hi,
                      const std::string& name = {});
  void set_objective_offset(double offset) { objective_offset_ = offset; }
  void set_name(std::string name) { name_ = std::move(name); }

  MilpModel build() const;

 private:
  std::string name_;
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<int> integer_vars_;
  std::vector<std::string> var_names_;
  std::vector<Row> rows_;
  double objective_offset_ = 0.0;
};

enum class SolutionKind { kFractional, kIntegral };

struct Solution {
  std::vector<double> values;
  double objective_value = 0.0;
  SolutionKind kind = SolutionKind::kFractional;
};

// Builds a Solution for the structural part of `x` (the first n entries).
Solution make_solution(const MilpModel& model, std::span<const double> x);

// Same model with the integrality requirements dropped.
MilpModel lp_relaxation(const MilpModel& model);

bool is_integral(std::span<const double> x, std::span<const int> integer_set,
                 double tol = kIntegralityTolerance);

// Rows and bounds within `tol`, integrality within kIntegralityTolerance.
bool check_feasible(const MilpModel& model, std::span<const double> x,
                    double tol = kFeasibilityTolerance);

// Largest row or bound violation (0 when feasible); integrality ignored.
double max_violation(const MilpModel& model, std::span<const double> x);

}  // namespace mrens

#endif  // MRENS_MODEL_H_
