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

// Free-format MPS input and output.
//
// Supported sections: NAME, ROWS (N, L, G, E), COLUMNS with INTORG/INTEND
// markers, RHS, RANGES, BOUNDS (UP, LO, FX, BV, MI, PL, UI, LI, FR) and
// ENDATA. The first N row is the objective; further N rows are dropped. An
// RHS entry on the objective row sets the constant to minus its value. A
// negative UP bound on a column whose lower bound is still 0 sets the lower
// bound to -infinity. Both continuous and integer columns default to
// [0, +infinity).

#ifndef MRENS_MPS_H_
#define MRENS_MPS_H_

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mrens/model.h"

namespace mrens {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);

  // 1-based; 0 when the error is not tied to a line.
  int line() const { return line_; }

 private:
  int line_;
};

MilpModel parse_mps(std::istream& in);
MilpModel parse_mps_string(std::string_view text);
// Throws ParseError with line 0 when the file cannot be opened.
MilpModel parse_mps_file(const std::string& path);

// Every row is written as G. Names come from the model when they are unique,
// otherwise they are generated.
void write_mps(const MilpModel& model, std::ostream& out);
std::string write_mps_string(const MilpModel& model);

}  // namespace mrens

#endif  // MRENS_MPS_H_
