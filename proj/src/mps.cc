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

#include "mrens/mps.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <fmt/format.h>

namespace mrens {

namespace {

// Magnitudes from here on are read as infinite.
constexpr double kMpsInfinity = 1e30;

enum class Section { kNone, kName, kRows, kColumns, kRhs, kRanges, kBounds, kEnd };

struct RowDecl {
  std::string name;
  char type = 'G';
  SparseVector entries;
  double rhs = 0.0;
  std::optional<double> range;
};

struct ColumnDecl {
  std::string name;
  bool integer = false;
  double objective = 0.0;
  double lower = 0.0;
  double upper = kInfinity;
};

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos == line.size()) break;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

class Parser {
 public:
  MilpModel parse(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '*') continue;
      const auto tokens = tokenize(line);
      if (tokens.empty()) continue;
      if (line[0] != ' ' && line[0] != '\t') {
        start_section(tokens);
      } else {
        data_line(tokens);
      }
      if (section_ == Section::kEnd) break;
    }
    if (section_ != Section::kEnd) fail(0, "missing ENDATA");
    if (!objective_row_) fail(0, "no objective (N) row");
    return build();
  }

 private:
  [[noreturn]] void fail(int line, const std::string& message) const {
    throw ParseError(line, message);
  }
  [[noreturn]] void fail(const std::string& message) const { fail(line_number_, message); }

  double number(std::string_view token) const {
    double value = 0.0;
    const char* first = token.data();
    if (!token.empty() && token[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      fail(fmt::format("expected a number, found '{}'", token));
    }
    if (value >= kMpsInfinity) return kInfinity;
    if (value <= -kMpsInfinity) return -kInfinity;
    return value;
  }

  void start_section(const std::vector<std::string_view>& tokens) {
    const std::string_view head = tokens[0];
    if (head == "NAME") {
      if (section_ != Section::kNone) fail("NAME must come first");
      section_ = Section::kName;
      if (tokens.size() > 1) name_ = std::string(tokens[1]);
      return;
    }
    Section next = Section::kNone;
    if (head == "ROWS") {
      next = Section::kRows;
    } else if (head == "COLUMNS") {
      next = Section::kColumns;
    } else if (head == "RHS") {
      next = Section::kRhs;
    } else if (head == "RANGES") {
      next = Section::kRanges;
    } else if (head == "BOUNDS") {
      next = Section::kBounds;
    } else if (head == "ENDATA") {
      next = Section::kEnd;
    } else {
      fail(fmt::format("unknown section '{}'", head));
    }
    if (next <= section_) fail(fmt::format("section {} out of order", head));
    if (tokens.size() > 1) fail(fmt::format("unexpected data after {}", head));
    section_ = next;
  }

  void data_line(const std::vector<std::string_view>& tokens) {
    switch (section_) {
      case Section::kRows: return row_line(tokens);
      case Section::kColumns: return column_line(tokens);
      case Section::kRhs: return rhs_line(tokens, false);
      case Section::kRanges: return rhs_line(tokens, true);
      case Section::kBounds: return bound_line(tokens);
      default: fail("data outside of a section");
    }
  }

  void row_line(const std::vector<std::string_view>& tokens) {
    if (tokens.size() != 2) fail("ROWS lines have a type and a name");
    const std::string_view type = tokens[0];
    const std::string name(tokens[1]);
    if (row_index_.contains(name)) fail(fmt::format("duplicate row '{}'", name));
    if (type == "N") {
      if (!objective_row_) {
        objective_row_ = name;
        row_index_[name] = kObjective;
      } else {
        row_index_[name] = kFreeRow;
      }
      return;
    }
    if (type != "L" && type != "G" && type != "E") {
      fail(fmt::format("unknown row type '{}'", type));
    }
    row_index_[name] = static_cast<int>(rows_.size());
    rows_.push_back({name, type[0], {}, 0.0, std::nullopt});
  }

  int row(std::string_view name) const {
    const auto it = row_index_.find(std::string(name));
    if (it == row_index_.end()) fail(fmt::format("undeclared row '{}'", name));
    return it->second;
  }

  int column(std::string_view name) const {
    const auto it = column_index_.find(std::string(name));
    if (it == column_index_.end()) fail(fmt::format("undeclared column '{}'", name));
    return it->second;
  }

  void column_line(const std::vector<std::string_view>& tokens) {
    if (tokens.size() >= 3 && tokens[1] == "'MARKER'") {
      if (tokens[2] == "'INTORG'") {
        in_integer_block_ = true;
      } else if (tokens[2] == "'INTEND'") {
        in_integer_block_ = false;
      } else {
        fail(fmt::format("unknown marker {}", tokens[2]));
      }
      return;
    }
    if (tokens.size() != 3 && tokens.size() != 5) {
      fail("COLUMNS lines have a column and one or two row/value pairs");
    }
    const std::string name(tokens[0]);
    auto it = column_index_.find(name);
    if (it == column_index_.end()) {
      it = column_index_.emplace(name, static_cast<int>(columns_.size())).first;
      columns_.push_back({name, in_integer_block_});
    }
    const int j = it->second;
    for (std::size_t k = 1; k + 1 < tokens.size(); k += 2) {
      const int i = row(tokens[k]);
      const double value = number(tokens[k + 1]);
      if (i == kObjective) {
        columns_[j].objective += value;
      } else if (i >= 0) {
        rows_[i].entries.push_back({j, value});
      }
    }
  }

  // RHS and RANGES share a layout: an optional set name, then pairs.
  void rhs_line(const std::vector<std::string_view>& tokens, bool ranges) {
    const std::size_t first = tokens.size() % 2 == 1 ? 1 : 0;
    if (tokens.size() < 2 || tokens.size() > 5) fail("malformed RHS/RANGES line");
    for (std::size_t k = first; k + 1 < tokens.size(); k += 2) {
      const int i = row(tokens[k]);
      const double value = number(tokens[k + 1]);
      if (ranges) {
        if (i < 0) fail(fmt::format("RANGES on objective or free row '{}'", tokens[k]));
        rows_[i].range = value;
      } else if (i == kObjective) {
        objective_offset_ = -value;
      } else if (i >= 0) {
        rows_[i].rhs = value;
      }
    }
  }

  void bound_line(const std::vector<std::string_view>& tokens) {
    if (tokens.size() < 2) fail("malformed BOUNDS line");
    const std::string_view type = tokens[0];
    const bool valued = type == "UP" || type == "LO" || type == "FX" || type == "UI" ||
                        type == "LI";
    const bool valueless = type == "BV" || type == "MI" || type == "PL" || type == "FR";
    if (!valued && !valueless) fail(fmt::format("unknown bound type '{}'", type));

    std::string_view col_name;
    std::optional<double> value;
    if (valued) {
      if (tokens.size() == 4) {
        col_name = tokens[2];
      } else if (tokens.size() == 3) {
        col_name = tokens[1];
      } else {
        fail(fmt::format("{} bound needs a column and a value", type));
      }
      value = number(tokens.back());
    } else if (tokens.size() == 2) {
      col_name = tokens[1];
    } else if (tokens.size() == 3) {
      // Either "set column" or, for BV, "column value".
      col_name = column_index_.contains(std::string(tokens[2])) ? tokens[2] : tokens[1];
    } else if (tokens.size() == 4 && type == "BV") {
      col_name = tokens[2];
    } else {
      fail(fmt::format("malformed {} bound", type));
    }
    ColumnDecl& c = columns_[column(col_name)];
    if (type == "UP" || type == "UI") {
      c.upper = *value;
      if (*value < 0 && c.lower == 0.0) c.lower = -kInfinity;
      if (type == "UI") c.integer = true;
    } else if (type == "LO" || type == "LI") {
      c.lower = *value;
      if (type == "LI") c.integer = true;
    } else if (type == "FX") {
      c.lower = *value;
      c.upper = *value;
    } else if (type == "BV") {
      c.integer = true;
      c.lower = 0.0;
      c.upper = 1.0;
    } else if (type == "MI") {
      c.lower = -kInfinity;
    } else if (type == "PL") {
      c.upper = kInfinity;
    } else {
      c.lower = -kInfinity;
      c.upper = kInfinity;
    }
  }

  MilpModel build() const {
    ModelBuilder builder;
    builder.set_name(name_);
    builder.set_objective_offset(objective_offset_);
    for (const ColumnDecl& c : columns_) {
      if (c.lower > c.upper) {
        fail(0, fmt::format("column '{}' has lower bound above upper bound", c.name));
      }
      builder.add_variable(c.lower, c.upper, c.objective, c.integer, c.name);
    }
    for (const RowDecl& r : rows_) {
      if (!r.range) {
        const RowSense sense = r.type == 'L'   ? RowSense::kLessEqual
                               : r.type == 'G' ? RowSense::kGreaterEqual
                                               : RowSense::kEqual;
        builder.add_row(r.entries, sense, r.rhs, r.name);
        continue;
      }
      const double width = std::abs(*r.range);
      double lo = r.rhs;
      double hi = r.rhs;
      if (r.type == 'L' || (r.type == 'E' && *r.range < 0)) {
        lo = r.rhs - width;
      } else {
        hi = r.rhs + width;
      }
      builder.add_ranged_row(r.entries, lo, hi, r.name);
    }
    try {
      return builder.build();
    } catch (const InvalidModel& e) {
      fail(0, e.what());
    }
  }

  static constexpr int kObjective = -1;
  static constexpr int kFreeRow = -2;

  int line_number_ = 0;
  Section section_ = Section::kNone;
  std::string name_;
  std::optional<std::string> objective_row_;
  double objective_offset_ = 0.0;
  bool in_integer_block_ = false;
  std::unordered_map<std::string, int> row_index_;
  std::vector<RowDecl> rows_;
  std::unordered_map<std::string, int> column_index_;
  std::vector<ColumnDecl> columns_;
};

// Model names when present and unique, otherwise generated ones.
std::vector<std::string> pick_names(std::vector<std::string> names, std::size_t count,
                                    const char* prefix) {
  std::unordered_set<std::string> seen;
  bool usable = names.size() == count;
  for (const std::string& name : names) {
    if (!usable) break;
    usable = !name.empty() && name.find_first_of(" \t") == std::string::npos &&
             seen.insert(name).second && name != "obj";
  }
  if (usable) return names;
  names.clear();
  for (std::size_t k = 0; k < count; ++k) names.push_back(fmt::format("{}{}", prefix, k));
  return names;
}

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, message) : message),
      line_(line) {}

MilpModel parse_mps(std::istream& in) { return Parser().parse(in); }

MilpModel parse_mps_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_mps(in);
}

MilpModel parse_mps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, fmt::format("cannot open '{}'", path));
  return parse_mps(in);
}

void write_mps(const MilpModel& model, std::ostream& out) {
  const int n = model.num_vars();
  std::vector<std::string> row_names;
  for (const Row& row : model.rows()) row_names.push_back(row.name);
  row_names = pick_names(std::move(row_names), model.num_rows(), "r");
  const auto col_names = pick_names(model.var_names(), n, "x");

  out << "NAME " << (model.name().empty() ? "model" : model.name()) << "\n";
  out << "ROWS\n N  obj\n";
  for (const std::string& name : row_names) out << " G  " << name << "\n";
  out << "COLUMNS\n";
  bool integer_block = false;
  int marker = 0;
  for (int j = 0; j < n; ++j) {
    if (model.is_integer(j) != integer_block) {
      integer_block = !integer_block;
      out << fmt::format("    M{}  'MARKER'  '{}'\n", marker++,
                         integer_block ? "INTORG" : "INTEND");
    }
    bool written = false;
    if (model.objective()[j] != 0.0) {
      out << fmt::format("    {}  obj  {}\n", col_names[j], model.objective()[j]);
      written = true;
    }
    for (const ColumnEntry& e : model.column(j)) {
      out << fmt::format("    {}  {}  {}\n", col_names[j], row_names[e.row], e.value);
      written = true;
    }
    if (!written) out << fmt::format("    {}  obj  0\n", col_names[j]);
  }
  if (integer_block) out << fmt::format("    M{}  'MARKER'  'INTEND'\n", marker);
  out << "RHS\n";
  if (model.objective_offset() != 0.0) {
    out << fmt::format("    rhs  obj  {}\n", -model.objective_offset());
  }
  for (int i = 0; i < model.num_rows(); ++i) {
    if (model.row(i).rhs != 0.0) {
      out << fmt::format("    rhs  {}  {}\n", row_names[i], model.row(i).rhs);
    }
  }
  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const double lo = model.lower()[j];
    const double up = model.upper()[j];
    if (lo == up) {
      out << fmt::format(" FX bnd  {}  {}\n", col_names[j], lo);
      continue;
    }
    if (std::isinf(lo)) {
      out << fmt::format(" MI bnd  {}\n", col_names[j]);
    } else if (lo != 0.0) {
      out << fmt::format(" LO bnd  {}  {}\n", col_names[j], lo);
    }
    if (!std::isinf(up)) out << fmt::format(" UP bnd  {}  {}\n", col_names[j], up);
  }
  out << "ENDATA\n";
}

std::string write_mps_string(const MilpModel& model) {
  std::ostringstream out;
  write_mps(model, out);
  return out.str();
}

}  // namespace mrens
