// Copyright 2026 The linrl Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command line driver.
//
//   linrl run    --config cfg.json [--seed N] [--out DIR] [--format csv,json,svg]
//   linrl sweep  --config cfg.json [--seed N] [--out DIR] [--format ...]
//   linrl report --input trace.json [--out DIR] [--format ...]
//
// Exit status: 0 ok, 2 invalid input, 1 anything else.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "linrl.hpp"

namespace {

using linrl::ExperimentConfig;
using linrl::RegretTrace;
namespace fs = std::filesystem;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> formats;
};

void apply(ExperimentConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.seeds = {*o.seed};
  if (o.out) cfg.output.dir = *o.out;
  if (!o.formats.empty()) cfg.output.formats = o.formats;
  cfg.validate();
}

std::string stem_for(const RegretTrace& t) {
  return t.algorithm + "_seed" + std::to_string(t.seed);
}

// Fit and peeling summaries; either may be unavailable for short or gapless runs.
nlohmann::json summarize(const RegretTrace& t) {
  nlohmann::json s{{"algorithm", t.algorithm},
                   {"seed", t.seed},
                   {"beta_scale", t.beta_scale},
                   {"beta", t.beta},
                   {"episodes", t.episodes.size()},
                   {"cumulative_regret", t.cumulative_regret()},
                   {"optimism_violations", t.diagnostics.optimism_violations},
                   {"confidence_violations", t.diagnostics.confidence_violations},
                   {"max_decomposition_error", t.diagnostics.max_decomposition_error},
                   {"max_inverse_error", t.diagnostics.max_inverse_error},
                   {"potential_violations", t.diagnostics.potential_violations},
                   {"ridge_optimal", t.diagnostics.ridge_optimal}};
  if (t.episodes.size() >= 100) {
    try {
      s["fit"] = linrl::to_json(linrl::fit_regret_models(t));
    } catch (const linrl::OracleError& e) {
      s["fit"] = {{"error", e.what()}};
    }
  }
  if (std::isfinite(t.gap_min) && t.gap_min > 0.0) {
    s["peeling"] = linrl::to_json(
        linrl::count_gap_intervals(t, t.gap_min, linrl::CountBoundParams::from_trace(t)));
  }
  return s;
}

void print_line(const RegretTrace& t) {
  std::cout << t.algorithm << " seed=" << t.seed << " beta_scale=" << linrl::format_double(t.beta_scale)
            << " K=" << t.episodes.size() << " regret=" << linrl::format_double(t.cumulative_regret());
  if (t.episodes.size() >= 100) {
    try {
      std::cout << " preferred=" << linrl::fit_regret_models(t).preferred;
    } catch (const linrl::OracleError&) {
      std::cout << " preferred=n/a";
    }
  }
  std::cout << "\n";
}

void write_traces(const std::vector<RegretTrace>& traces, const fs::path& dir,
                  const std::vector<std::string>& formats) {
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& t : traces) {
    linrl::export_trace(t, dir, stem_for(t), formats);
    summary.push_back(summarize(t));
    print_line(t);
  }
  linrl::write_text(dir / "summary.json", summary.dump(2) + "\n");
}

int cmd_run(const std::string& config_path, const Overrides& o) {
  ExperimentConfig cfg = linrl::load_config(config_path);
  apply(cfg, o);
  const auto traces = linrl::run_experiment(cfg);
  const fs::path dir = cfg.output.dir;
  linrl::write_text(dir / "config.json", linrl::to_json(cfg).dump(2) + "\n");
  write_traces(traces, dir, cfg.output.formats);
  return 0;
}

int cmd_sweep(const std::string& config_path, const Overrides& o) {
  ExperimentConfig cfg = linrl::load_config(config_path);
  apply(cfg, o);
  const auto result = linrl::run_sweep(cfg);
  const fs::path dir = cfg.output.dir;
  linrl::write_text(dir / "config.json", linrl::to_json(cfg).dump(2) + "\n");
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    const std::string name = "scale_" + linrl::format_double(cell.beta_scale);
    write_traces(cell.traces, dir / name, cfg.output.formats);
    cells.push_back({{"beta_scale", cell.beta_scale},
                     {"dir", name},
                     {"mean_cumulative_regret", cell.mean_final_regret()}});
  }
  const double tuned = result.tuned_cell().beta_scale;
  linrl::write_text(dir / "sweep.json",
                    nlohmann::json{{"cells", cells}, {"tuned_beta_scale", tuned}}.dump(2) + "\n");
  std::cout << "tuned beta_scale=" << linrl::format_double(tuned) << "\n";
  return 0;
}

int cmd_report(const std::string& input, const Overrides& o) {
  const RegretTrace t = linrl::import_trace(input);
  const nlohmann::json s = summarize(t);
  std::cout << s.dump(2) << "\n";
  if (o.out) {
    const std::vector<std::string> formats = o.formats.empty() ? std::vector<std::string>{"svg"} : o.formats;
    for (const auto& f : formats)
      linrl::require(f == "csv" || f == "json" || f == "svg", "unknown output format '" + f + "'");
    const fs::path dir = *o.out;
    linrl::export_trace(t, dir, stem_for(t), formats);
    linrl::write_text(dir / (stem_for(t) + "_report.json"), s.dump(2) + "\n");
  }
  return 0;
}

void add_overrides(CLI::App* sub, Overrides& o) {
  sub->add_option_function<std::uint64_t>("--seed", [&o](const std::uint64_t& v) { o.seed = v; },
                                          "Run a single seed instead of the configured list");
  sub->add_option_function<std::string>("--out", [&o](const std::string& v) { o.out = v; },
                                        "Output directory");
  sub->add_option("--format", o.formats, "Output formats (csv, json, svg)")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Episodic linear RL regret experiments"};
  app.require_subcommand(1);
  Overrides o;
  std::string config_path, input;

  auto* run = app.add_subcommand("run", "Run every configured seed");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  add_overrides(run, o);

  auto* sweep = app.add_subcommand("sweep", "Grid over beta scales and seeds");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
  add_overrides(sweep, o);

  auto* report = app.add_subcommand("report", "Fit and peeling summary of an exported JSON trace");
  report->add_option("--input", input, "Trace exported as JSON")->required();
  add_overrides(report, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(config_path, o);
    if (*sweep) return cmd_sweep(config_path, o);
    return cmd_report(input, o);
  } catch (const linrl::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
