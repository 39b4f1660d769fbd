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

// Command-line driver.
//
//   mrens solve <file.mps>... [--mode rens|mrens|off] [--out DIR]
//   mrens compare <file.mps>... [--a mrens] [--b rens] [--out DIR]
//   mrens report DIR [--against DIR]
//   mrens generate --family blocks|parity|knapsack --size K [--seed S] --out FILE
//
// Exit codes: 0 on completion, 1 on usage or runtime errors, 2 on any
// input parse error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mrens/experiment.h"
#include "mrens/mps.h"
#include "mrens/report.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitError = 1;
constexpr int kExitParseError = 2;

struct Options {
  std::vector<std::string> files;
  std::string mode = "mrens";
  std::string mode_a = "mrens";
  std::string mode_b = "rens";
  std::vector<int> seeds{0, 1, 2, 3, 4};
  std::int64_t node_limit = 5000;
  std::int64_t stall_limit = 500;
  double min_int_fixing = 0.5;
  double min_total_fixing = 0.25;
  int refgen_iters = 20;
  double time_limit = 0.0;
  std::int64_t instance_node_limit = 100000;
  bool wall_time = false;
  std::string out;
  std::string report_dir;
  std::string against;
  std::string family = "blocks";
  int size = 3;
  int seed = 0;
};

void add_experiment_flags(CLI::App& app, Options& opt) {
  app.add_option("files", opt.files, "MPS instances")->required()->check(CLI::ExistingFile);
  app.add_option("--seeds", opt.seeds, "Seeds, comma separated")->delimiter(',');
  app.add_option("--node-limit", opt.node_limit, "Sub-MILP node limit")
      ->check(CLI::PositiveNumber);
  app.add_option("--stall-limit", opt.stall_limit, "Sub-MILP stalling node limit")
      ->check(CLI::PositiveNumber);
  app.add_option("--min-int-fixing", opt.min_int_fixing, "Integer fixing gate")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--min-total-fixing", opt.min_total_fixing, "Total fixing gate after presolve")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--refgen-iters", opt.refgen_iters, "Relax-and-cut iterations")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--time-limit", opt.time_limit,
                 "Sub-MILP wall-clock limit in seconds; 0 disables (results then reproducible)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--instance-node-limit", opt.instance_node_limit,
                 "Node limit of the final full-model solve")
      ->check(CLI::PositiveNumber);
  app.add_flag("--wall-time", opt.wall_time, "Report wall-clock seconds in addition");
  app.add_option("--out", opt.out, "Output directory");
}

mrens::ExperimentConfig make_config(const Options& opt, const std::string& mode) {
  mrens::ExperimentConfig config;
  config.seeds = opt.seeds;
  config.mode = mrens::parse_experiment_mode(mode);
  config.limits.node_limit = opt.node_limit;
  config.limits.stalling_node_limit = opt.stall_limit;
  config.limits.min_total_fixing_after_presolve = opt.min_total_fixing;
  if (opt.time_limit > 0.0) config.limits.time_limit = opt.time_limit;
  config.gates.min_int_fixing = opt.min_int_fixing;
  config.refgen.max_iterations = opt.refgen_iters;
  config.instance_node_limit = opt.instance_node_limit;
  return config;
}

std::vector<mrens::Instance> load_instances(const std::vector<std::string>& files) {
  std::vector<mrens::Instance> instances;
  std::map<std::string, int> stems;
  for (const std::string& file : files) ++stems[fs::path(file).stem().string()];
  for (const std::string& file : files) {
    const std::string stem = fs::path(file).stem().string();
    try {
      instances.push_back({stems[stem] > 1 ? file : stem, mrens::parse_mps_file(file)});
    } catch (const mrens::ParseError& e) {
      // Prefix the file; the line number stays with the error.
      std::string message = e.what();
      const std::string prefix = fmt::format("line {}: ", e.line());
      if (message.starts_with(prefix)) message.erase(0, prefix.size());
      throw mrens::ParseError(e.line(), fmt::format("{}: {}", file, message));
    }
  }
  return instances;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

void write_metrics(const fs::path& dir, const mrens::RunMetrics& metrics,
                   const mrens::ExperimentConfig& config, bool wall_time) {
  fs::create_directories(dir);
  std::ostringstream calls, runs;
  mrens::write_calls_csv(metrics.calls, calls, wall_time);
  mrens::write_runs_csv(metrics.runs, runs, wall_time);
  write_file(dir / "calls.csv", calls.str());
  write_file(dir / "runs.csv", runs.str());
  write_file(dir / "summary.json", mrens::summary_json(metrics, config));
}

int run_solve(const Options& opt) {
  const auto instances = load_instances(opt.files);
  const auto config = make_config(opt, opt.mode);
  const mrens::RunMetrics metrics = mrens::run_experiment(instances, config);
  std::cout << mrens::format_call_table(std::vector<mrens::RunMetrics>{metrics});
  std::cout << fmt::format("\n{:<20}{:>6}{:>12}{:>16}{:>10}{:>10}\n", "instance", "seed",
                           "status", "objective", "nodes", "work");
  for (const mrens::InstanceRun& r : metrics.runs) {
    std::cout << fmt::format("{:<20}{:>6}{:>12}{:>16}{:>10}{:>10}\n", r.instance_id, r.seed,
                             r.status, r.objective ? fmt::format("{:.6g}", *r.objective) : "-",
                             r.nodes, r.work);
  }
  if (!opt.out.empty()) write_metrics(opt.out, metrics, config, opt.wall_time);
  return 0;
}

int run_compare(const Options& opt) {
  const auto instances = load_instances(opt.files);
  const auto config_a = make_config(opt, opt.mode_a);
  const auto config_b = make_config(opt, opt.mode_b);
  const mrens::RunMetrics a = mrens::run_experiment(instances, config_a);
  const mrens::RunMetrics b = mrens::run_experiment(instances, config_b);
  const mrens::Comparison comparison =
      mrens::categorize_and_compare(a, b, {.wall_time = opt.wall_time});
  std::cout << mrens::format_call_table(std::vector<mrens::RunMetrics>{a, b}) << "\n";
  std::cout << mrens::format_comparison_table(comparison);
  if (!opt.out.empty()) {
    write_metrics(fs::path(opt.out) / "a", a, config_a, opt.wall_time);
    write_metrics(fs::path(opt.out) / "b", b, config_b, opt.wall_time);
    write_file(fs::path(opt.out) / "comparison.json", mrens::comparison_json(comparison));
  }
  return 0;
}

mrens::RunMetrics read_metrics(const fs::path& dir) {
  std::ifstream calls_in(dir / "calls.csv");
  std::ifstream runs_in(dir / "runs.csv");
  if (!calls_in || !runs_in) {
    throw mrens::ParseError(0, fmt::format("'{}' lacks calls.csv or runs.csv", dir.string()));
  }
  auto calls = mrens::read_calls_csv(calls_in);
  auto runs = mrens::read_runs_csv(runs_in);
  mrens::ExperimentMode mode = mrens::ExperimentMode::kOff;
  if (!calls.empty()) {
    mode = calls.front().mode == mrens::NeighborhoodMode::kRens ? mrens::ExperimentMode::kRens
                                                                : mrens::ExperimentMode::kMrens;
  }
  return mrens::aggregate(mode, std::move(calls), std::move(runs));
}

int run_report(const Options& opt) {
  std::vector<mrens::RunMetrics> metrics{read_metrics(opt.report_dir)};
  if (!opt.against.empty()) metrics.push_back(read_metrics(opt.against));
  std::cout << mrens::format_call_table(metrics);
  if (metrics.size() == 2) {
    std::cout << "\n"
              << mrens::format_comparison_table(
                     mrens::categorize_and_compare(metrics[0], metrics[1]));
  }
  return 0;
}

mrens::MilpModel generate(const Options& opt) {
  mrens::ModelBuilder b;
  b.set_name(fmt::format("{}{}", opt.family, opt.size));
  const int k = opt.size;
  if (opt.family == "blocks") {
    // a + 2b = 1 per block over binaries, plus 2k binaries z >= 1.
    for (int i = 0; i < k; ++i) {
      const int a = b.add_variable(0, 1, 1, true, fmt::format("a{}", i));
      const int c = b.add_variable(0, 1, 1, true, fmt::format("b{}", i));
      b.add_row({{a, 1.0}, {c, 2.0}}, mrens::RowSense::kEqual, 1.0, fmt::format("blk{}", i));
    }
    for (int i = 0; i < 2 * k; ++i) {
      const int z = b.add_variable(0, 1, 0, true, fmt::format("z{}", i));
      b.add_row({{z, 1.0}}, mrens::RowSense::kGreaterEqual, 1.0, fmt::format("fix{}", i));
    }
  } else if (opt.family == "parity") {
    mrens::SparseVector row;
    for (int j = 0; j < k; ++j) {
      b.add_variable(0, 1, 0, true, fmt::format("x{}", j));
      row.push_back({j, 2.0});
    }
    b.add_row(row, mrens::RowSense::kEqual, 2 * (k / 2) + 1, "odd");
  } else if (opt.family == "knapsack") {
    // Two knapsack rows with weights and profits from mt19937_64(seed).
    std::mt19937_64 rng(static_cast<std::uint64_t>(opt.seed));
    const auto draw = [&](int lo, int hi) {
      return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    mrens::SparseVector w1, w2;
    int total1 = 0, total2 = 0;
    for (int j = 0; j < k; ++j) {
      b.add_variable(0, 1, -draw(10, 60), true, fmt::format("x{}", j));
      const int a1 = draw(5, 40), a2 = draw(5, 40);
      w1.push_back({j, static_cast<double>(a1)});
      w2.push_back({j, static_cast<double>(a2)});
      total1 += a1;
      total2 += a2;
    }
    b.add_row(w1, mrens::RowSense::kLessEqual, total1 / 2, "cap1");
    b.add_row(w2, mrens::RowSense::kLessEqual, total2 / 2, "cap2");
  } else {
    throw CLI::ValidationError("--family", "unknown family '" + opt.family + "'");
  }
  return b.build();
}

int run_generate(const Options& opt) {
  const std::string text = mrens::write_mps_string(generate(opt));
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    write_file(opt.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-reference neighborhood search experiments"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* solve = app.add_subcommand("solve", "Run one setting over instances and seeds");
  add_experiment_flags(*solve, opt);
  solve->add_option("--mode", opt.mode, "rens, mrens or off")
      ->check(CLI::IsMember({"rens", "mrens", "off"}));

  CLI::App* compare = app.add_subcommand("compare", "Run two settings and compare them");
  add_experiment_flags(*compare, opt);
  compare->add_option("--a", opt.mode_a, "First setting")
      ->check(CLI::IsMember({"rens", "mrens", "off"}));
  compare->add_option("--b", opt.mode_b, "Second setting")
      ->check(CLI::IsMember({"rens", "mrens", "off"}));

  CLI::App* report = app.add_subcommand("report", "Regenerate tables from CSV records");
  report->add_option("dir", opt.report_dir, "Directory with calls.csv and runs.csv")
      ->required()
      ->check(CLI::ExistingDirectory);
  report->add_option("--against", opt.against, "Second directory to compare with")
      ->check(CLI::ExistingDirectory);

  CLI::App* gen = app.add_subcommand("generate", "Write a constructed instance as MPS");
  gen->add_option("--family", opt.family, "blocks, parity or knapsack")
      ->check(CLI::IsMember({"blocks", "parity", "knapsack"}));
  gen->add_option("--size", opt.size, "Family size parameter")->check(CLI::PositiveNumber);
  gen->add_option("--seed", opt.seed, "Generator seed");
  gen->add_option("--out", opt.out, "Output file; stdout when omitted");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) return run_solve(opt);
    if (*compare) return run_compare(opt);
    if (*report) return run_report(opt);
    return run_generate(opt);
  } catch (const mrens::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
