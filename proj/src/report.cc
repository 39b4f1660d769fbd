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

#include <charconv>
#include <cmath>
#include <algorithm>
#include <map>
#include <string_view>
#include <tuple>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mrens/mps.h"

namespace mrens {

namespace {

using Key = std::tuple<std::string, int>;

constexpr const char* kCallColumns[] = {
    "instance", "seed", "mode", "executed", "solution_found", "best_found",
    "fixing_rate", "total_fixing_rate", "num_references", "gate", "status", "nodes",
    "lp_iterations", "objective"};
constexpr const char* kRunColumns[] = {"instance", "seed",  "status", "objective",
                                       "nodes",    "work"};

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string number(double value) { return fmt::format("{}", value); }

std::string optional_number(const std::optional<double>& value) {
  return value ? number(*value) : std::string();
}

// Splits one CSV line; quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_csv(const std::string& line, int line_number) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        fields.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError(line_number, "unterminated quote");
  return fields;
}

class CsvReader {
 public:
  CsvReader(std::istream& in, std::span<const char* const> columns) : in_(in) {
    std::string line;
    if (!std::getline(in_, line)) throw ParseError(0, "empty CSV");
    ++line_;
    header_ = split_csv(line, line_);
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (k >= header_.size() || header_[k] != columns[k]) {
        throw ParseError(1, fmt::format("expected column '{}'", columns[k]));
      }
    }
  }

  bool next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (line.empty()) continue;
      fields_ = split_csv(line, line_);
      if (fields_.size() != header_.size()) {
        throw ParseError(line_, fmt::format("expected {} fields, found {}", header_.size(),
                                            fields_.size()));
      }
      return true;
    }
    return false;
  }

  const std::string& text(std::size_t k) const { return fields_[k]; }

  double real(std::size_t k) const {
    const std::string& f = fields_[k];
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      throw ParseError(line_, fmt::format("bad number '{}' in column {}", f, header_[k]));
    }
    return value;
  }

  std::optional<double> optional_real(std::size_t k) const {
    if (fields_[k].empty()) return std::nullopt;
    return real(k);
  }

  std::int64_t integer(std::size_t k) const {
    const std::string& f = fields_[k];
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      throw ParseError(line_, fmt::format("bad integer '{}' in column {}", f, header_[k]));
    }
    return value;
  }

  bool boolean(std::size_t k) const {
    if (fields_[k] == "1") return true;
    if (fields_[k] == "0") return false;
    throw ParseError(line_, fmt::format("bad flag '{}' in column {}", fields_[k], header_[k]));
  }

  // Index of the optional trailing wall_time column, if present.
  std::optional<std::size_t> column(const std::string& name) const {
    for (std::size_t k = 0; k < header_.size(); ++k) {
      if (header_[k] == name) return k;
    }
    return std::nullopt;
  }

  template <typename Enum, std::size_t N>
  Enum named(std::size_t k, const Enum (&values)[N]) const {
    for (Enum v : values) {
      if (fields_[k] == to_string(v)) return v;
    }
    throw ParseError(line_, fmt::format("unknown value '{}' in column {}", fields_[k],
                                        header_[k]));
  }

 private:
  std::istream& in_;
  int line_ = 0;
  std::vector<std::string> header_;
  std::vector<std::string> fields_;
};

constexpr NeighborhoodMode kModes[] = {NeighborhoodMode::kRens, NeighborhoodMode::kMrens};
constexpr GateOutcome kGates[] = {GateOutcome::kPassed, GateOutcome::kIntegerFixing,
                                  GateOutcome::kTotalFixing, GateOutcome::kNoReference};
constexpr SubsolveStatus kStatuses[] = {
    SubsolveStatus::kOptimal,           SubsolveStatus::kFeasibleLimitHit,
    SubsolveStatus::kInfeasible,        SubsolveStatus::kAbortedFixingGate,
    SubsolveStatus::kLimitNoSolution,   SubsolveStatus::kUnbounded};

std::optional<double> geomean_or_empty(const std::vector<double>& values, double shift) {
  if (values.empty()) return std::nullopt;
  return shifted_geomean(values, shift);
}

std::optional<double> quotient(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a || !b || *b == 0.0) return std::nullopt;
  return *a / *b;
}

std::string format_value(const std::optional<double>& value) {
  return value && std::isfinite(*value) ? fmt::format("{:.2f}", *value) : "-";
}

nlohmann::json optional_json(const std::optional<double>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

}  // namespace

double shifted_geomean(std::span<const double> values, double shift) {
  if (values.empty()) throw ContractViolation("geometric mean of an empty list");
  if (!(shift >= 0.0)) throw ContractViolation("shift must be nonnegative");
  double sum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw ContractViolation("geometric mean needs nonnegative values");
    sum += std::log(v + shift);
  }
  return std::exp(sum / static_cast<double>(values.size())) - shift;
}

std::optional<double> ComparisonRow::time_quotient() const { return quotient(time_a, time_b); }
std::optional<double> ComparisonRow::nodes_quotient() const {
  return quotient(nodes_a, nodes_b);
}

Comparison categorize_and_compare(const RunMetrics& a, const RunMetrics& b,
                                  const ComparisonOptions& options) {
  std::map<Key, const InstanceRun*> runs_a, runs_b;
  for (const InstanceRun& r : a.runs) runs_a[{r.instance_id, r.seed}] = &r;
  for (const InstanceRun& r : b.runs) runs_b[{r.instance_id, r.seed}] = &r;
  if (runs_a.size() != a.runs.size() || runs_b.size() != b.runs.size()) {
    throw ContractViolation("duplicate instance-seed pair in a run");
  }
  bool same_universe = runs_a.size() == runs_b.size();
  for (auto ia = runs_a.begin(), ib = runs_b.begin(); same_universe && ia != runs_a.end();
       ++ia, ++ib) {
    same_universe = ia->first == ib->first;
  }
  if (!same_universe) throw ContractViolation("settings cover different instance-seed pairs");

  std::map<Key, std::vector<const HeuristicCallRecord*>> calls_a, calls_b;
  for (const auto& c : a.calls) calls_a[{c.instance_id, c.seed}].push_back(&c);
  for (const auto& c : b.calls) calls_b[{c.instance_id, c.seed}].push_back(&c);
  const auto same_calls = [&](const Key& key) {
    const auto& x = calls_a[key];
    const auto& y = calls_b[key];
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (!same_outcome(*x[k], *y[k])) return false;
    }
    return true;
  };

  const auto time_of = [&](const InstanceRun& r) {
    return options.wall_time ? r.wall_time : static_cast<double>(r.work);
  };
  Comparison comparison{to_string(a.mode), to_string(b.mode), {}};
  for (const char* subset : {"all", "both-solved", "affected", "affected-solved"}) {
    const std::string name = subset;
    ComparisonRow row{name};
    std::vector<double> ta, tb, na, nb;
    for (const auto& [key, ra] : runs_a) {
      const InstanceRun* rb = runs_b.at(key);
      const bool both = ra->solved() && rb->solved();
      const bool affected = ra->nodes != rb->nodes || !same_calls(key);
      const bool member = name == "all" || (name == "both-solved" && both) ||
                          (name == "affected" && affected) ||
                          (name == "affected-solved" && affected && both);
      if (!member) continue;
      ++row.count;
      row.solved_a += ra->solved();
      row.solved_b += rb->solved();
      ta.push_back(time_of(*ra));
      tb.push_back(time_of(*rb));
      na.push_back(static_cast<double>(ra->nodes));
      nb.push_back(static_cast<double>(rb->nodes));
    }
    row.time_a = geomean_or_empty(ta, options.time_shift);
    row.time_b = geomean_or_empty(tb, options.time_shift);
    row.nodes_a = geomean_or_empty(na, options.node_shift);
    row.nodes_b = geomean_or_empty(nb, options.node_shift);
    comparison.rows.push_back(std::move(row));
  }
  return comparison;
}

std::string format_quotient(std::optional<double> q) { return format_value(q); }

std::string format_call_table(std::span<const RunMetrics> metrics) {
  std::string out = fmt::format("{:<8}{:>8}{:>11}{:>9}{:>9}{:>9}\n", "mode", "calls",
                                "executed", "found", "best", "fixing");
  for (const RunMetrics& m : metrics) {
    const ModeSummary& s = m.summary;
    out += fmt::format("{:<8}{:>8}{:>10.1f}%{:>8.1f}%{:>8.1f}%{:>8.1f}%\n", to_string(m.mode),
                       s.calls, s.executed_pct, s.found_pct, s.best_pct, s.mean_fixing_pct);
  }
  return out;
}

std::string format_comparison_table(const Comparison& c) {
  const std::string a = c.label_a;
  const std::string b = c.label_b;
  const std::size_t w = std::max<std::size_t>(10, std::max(a.size(), b.size()) + 8);
  constexpr std::string_view kLine = "{:<16}{:>6}{:>{}}{:>{}}{:>{}}{:>{}}{:>8}{:>{}}{:>{}}{:>8}\n";
  std::string out = fmt::format(kLine, "subset", "count", "solved:" + a, w, "solved:" + b, w,
                                "time:" + a, w, "time:" + b, w, "time", "nodes:" + a, w,
                                "nodes:" + b, w, "nodes");
  for (const ComparisonRow& r : c.rows) {
    out += fmt::format(kLine, r.subset, r.count, r.solved_a, w, r.solved_b, w,
                       format_value(r.time_a), w, format_value(r.time_b), w,
                       format_quotient(r.time_quotient()), format_value(r.nodes_a), w,
                       format_value(r.nodes_b), w, format_quotient(r.nodes_quotient()));
  }
  return out;
}

void write_calls_csv(const std::vector<HeuristicCallRecord>& calls, std::ostream& out,
                     bool wall_time) {
  std::string header;
  for (const char* column : kCallColumns) header += std::string(header.empty() ? "" : ",") + column;
  out << header << (wall_time ? ",wall_time" : "") << "\n";
  for (const HeuristicCallRecord& c : calls) {
    out << fmt::format("{},{},{},{:d},{:d},{:d},{},{},{},{},{},{},{},{}", csv_field(c.instance_id),
                       c.seed, to_string(c.mode), c.executed, c.solution_found, c.best_found,
                       number(c.fixing_rate), number(c.total_fixing_rate), c.num_references,
                       to_string(c.gate), to_string(c.status), c.nodes, c.lp_iterations,
                       optional_number(c.objective));
    if (wall_time) out << "," << number(c.wall_time);
    out << "\n";
  }
}

void write_runs_csv(const std::vector<InstanceRun>& runs, std::ostream& out, bool wall_time) {
  std::string header;
  for (const char* column : kRunColumns) header += std::string(header.empty() ? "" : ",") + column;
  out << header << (wall_time ? ",wall_time" : "") << "\n";
  for (const InstanceRun& r : runs) {
    out << fmt::format("{},{},{},{},{},{}", csv_field(r.instance_id), r.seed, r.status,
                       optional_number(r.objective), r.nodes, r.work);
    if (wall_time) out << "," << number(r.wall_time);
    out << "\n";
  }
}

std::vector<HeuristicCallRecord> read_calls_csv(std::istream& in) {
  CsvReader reader(in, kCallColumns);
  const auto wall = reader.column("wall_time");
  std::vector<HeuristicCallRecord> calls;
  while (reader.next()) {
    HeuristicCallRecord c;
    c.instance_id = reader.text(0);
    c.seed = static_cast<int>(reader.integer(1));
    c.mode = reader.named(2, kModes);
    c.executed = reader.boolean(3);
    c.solution_found = reader.boolean(4);
    c.best_found = reader.boolean(5);
    c.fixing_rate = reader.real(6);
    c.total_fixing_rate = reader.real(7);
    c.num_references = static_cast<int>(reader.integer(8));
    c.gate = reader.named(9, kGates);
    c.status = reader.named(10, kStatuses);
    c.nodes = reader.integer(11);
    c.lp_iterations = reader.integer(12);
    c.objective = reader.optional_real(13);
    if (wall) c.wall_time = reader.real(*wall);
    calls.push_back(std::move(c));
  }
  return calls;
}

std::vector<InstanceRun> read_runs_csv(std::istream& in) {
  CsvReader reader(in, kRunColumns);
  const auto wall = reader.column("wall_time");
  std::vector<InstanceRun> runs;
  while (reader.next()) {
    InstanceRun r;
    r.instance_id = reader.text(0);
    r.seed = static_cast<int>(reader.integer(1));
    r.status = reader.text(2);
    r.objective = reader.optional_real(3);
    r.nodes = reader.integer(4);
    r.work = reader.integer(5);
    if (wall) r.wall_time = reader.real(*wall);
    runs.push_back(std::move(r));
  }
  return runs;
}

std::string summary_json(const RunMetrics& metrics, const ExperimentConfig& config) {
  nlohmann::json j;
  j["mode"] = to_string(metrics.mode);
  j["seed_realization"] =
      "variable-order permutation per seed (Fisher-Yates over mt19937_64(seed)); "
      "seed 0 keeps the input order";
  j["time_unit"] = "simplex iterations";
  j["config"] = {
      {"seeds", config.seeds},
      {"node_limit", config.limits.node_limit},
      {"stall_limit", config.limits.stalling_node_limit},
      {"min_int_fixing", config.gates.min_int_fixing},
      {"min_total_fixing", config.limits.min_total_fixing_after_presolve},
      {"refgen_iterations", config.refgen.max_iterations},
      {"instance_node_limit", config.instance_node_limit},
      {"time_limit", config.limits.time_limit ? nlohmann::json(*config.limits.time_limit)
                                              : nlohmann::json(nullptr)},
  };
  const ModeSummary& s = metrics.summary;
  j["calls"] = {
      {"count", s.calls},
      {"executed_pct", s.executed_pct},
      {"found_pct", s.found_pct},
      {"best_pct", s.best_pct},
      {"mean_fixing_pct", s.mean_fixing_pct},
  };
  std::int64_t solved = 0;
  for (const InstanceRun& r : metrics.runs) solved += r.solved();
  j["runs"] = {{"count", metrics.runs.size()}, {"solved", solved}};
  return j.dump(2) + "\n";
}

std::string comparison_json(const Comparison& comparison) {
  nlohmann::json j;
  j["a"] = comparison.label_a;
  j["b"] = comparison.label_b;
  j["rows"] = nlohmann::json::array();
  for (const ComparisonRow& r : comparison.rows) {
    j["rows"].push_back({
        {"subset", r.subset},
        {"count", r.count},
        {"solved_a", r.solved_a},
        {"solved_b", r.solved_b},
        {"time_a", optional_json(r.time_a)},
        {"time_b", optional_json(r.time_b)},
        {"nodes_a", optional_json(r.nodes_a)},
        {"nodes_b", optional_json(r.nodes_b)},
        {"time_quotient", optional_json(r.time_quotient())},
        {"nodes_quotient", optional_json(r.nodes_quotient())},
    });
  }
  return j.dump(2) + "\n";
}

}  // namespace mrens
