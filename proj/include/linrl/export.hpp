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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "linrl/common.hpp"
#include "linrl/experiment.hpp"
#include "linrl/peeling.hpp"
#include "linrl/regret_fit.hpp"

namespace linrl {

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string trace_to_csv(const RegretTrace& t) {
  std::ostringstream out;
  out << "episode,regret,cum_regret,optimism_violations\n";
  for (const auto& e : t.episodes) {
    out << e.episode << ',' << format_double(e.regret) << ',' << format_double(e.cum_regret) << ','
        << e.optimism_violations << '\n';
  }
  return out.str();
}

// ---- JSON ----------------------------------------------------------------

namespace detail {

inline nlohmann::json nullable(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

inline double from_nullable(const nlohmann::json& j) {
  return j.is_null() ? kInf : j.get<double>();
}

}  // namespace detail

inline nlohmann::json to_json(const RegretTrace& t) {
  nlohmann::json eps = nlohmann::json::array();
  for (const auto& e : t.episodes) {
    eps.push_back({{"episode", e.episode},
                   {"states", e.states},
                   {"actions", e.actions},
                   {"regret", e.regret},
                   {"cum_regret", e.cum_regret},
                   {"bonuses", e.bonuses},
                   {"gaps", e.gaps},
                   {"suboptimality", e.suboptimality},
                   {"optimism_violations", e.optimism_violations},
                   {"confidence_violations", e.confidence_violations},
                   {"decomposition_error", e.decomposition_error}});
  }
  const auto& d = t.diagnostics;
  return {{"schema_version", 1},
          {"kind", "regret_trace"},
          {"algorithm", t.algorithm},
          {"seed", t.seed},
          {"beta_scale", t.beta_scale},
          {"beta", t.beta},
          {"horizon", t.horizon},
          {"feature_dim", t.feature_dim},
          {"delta", t.delta},
          {"c_theta", t.c_theta},
          {"gap_min", detail::nullable(t.gap_min)},
          {"diagnostics",
           {{"optimism_violations", d.optimism_violations},
            {"confidence_violations", d.confidence_violations},
            {"max_decomposition_error", d.max_decomposition_error},
            {"max_inverse_error", d.max_inverse_error},
            {"max_inverse_drift", d.max_inverse_drift},
            {"potential", d.potential},
            {"potential_bound", d.potential_bound},
            {"potential_violations", d.potential_violations},
            {"ridge_optimal", d.ridge_optimal}}},
          {"episodes", eps}};
}

inline RegretTrace trace_from_json(const nlohmann::json& j) {
  try {
    if (j.value("kind", std::string{}) != "regret_trace") throw ValidationError("not a regret trace");
    RegretTrace t;
    t.algorithm = j.at("algorithm").get<std::string>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.beta_scale = j.at("beta_scale").get<double>();
    t.beta = j.at("beta").get<double>();
    t.horizon = j.at("horizon").get<std::size_t>();
    t.feature_dim = j.at("feature_dim").get<std::size_t>();
    t.delta = j.at("delta").get<double>();
    t.c_theta = j.at("c_theta").get<double>();
    t.gap_min = detail::from_nullable(j.at("gap_min"));
    const auto& d = j.at("diagnostics");
    t.diagnostics.optimism_violations = d.at("optimism_violations").get<std::size_t>();
    t.diagnostics.confidence_violations = d.at("confidence_violations").get<std::size_t>();
    t.diagnostics.max_decomposition_error = d.at("max_decomposition_error").get<double>();
    t.diagnostics.max_inverse_error = d.at("max_inverse_error").get<double>();
    t.diagnostics.max_inverse_drift = d.at("max_inverse_drift").get<double>();
    t.diagnostics.potential = d.at("potential").get<std::vector<double>>();
    t.diagnostics.potential_bound = d.at("potential_bound").get<std::vector<double>>();
    t.diagnostics.potential_violations = d.at("potential_violations").get<std::size_t>();
    t.diagnostics.ridge_optimal = d.at("ridge_optimal").get<bool>();
    for (const auto& e : j.at("episodes")) {
      EpisodeRecord r;
      r.episode = e.at("episode").get<std::size_t>();
      r.states = e.at("states").get<std::vector<std::size_t>>();
      r.actions = e.at("actions").get<std::vector<std::size_t>>();
      r.regret = e.at("regret").get<double>();
      r.cum_regret = e.at("cum_regret").get<double>();
      r.bonuses = e.at("bonuses").get<std::vector<double>>();
      r.gaps = e.at("gaps").get<std::vector<double>>();
      r.suboptimality = e.at("suboptimality").get<std::vector<double>>();
      r.optimism_violations = e.at("optimism_violations").get<std::size_t>();
      r.confidence_violations = e.at("confidence_violations").get<std::size_t>();
      r.decomposition_error = e.at("decomposition_error").get<double>();
      t.episodes.push_back(std::move(r));
    }
    return t;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed trace JSON: ") + ex.what());
  }
}

inline nlohmann::json to_json(const GapIntervalCounts& c) {
  return {{"gap_min", c.gap_min},
          {"num_intervals", c.num_intervals},
          {"interval_counts", c.interval},
          {"threshold_counts", c.threshold},
          {"threshold_first_half", c.threshold_first_half},
          {"threshold_second_half", c.threshold_second_half},
          {"bound", c.bound},
          {"within_bounds", c.within_bounds()}};
}

inline nlohmann::json to_json(const RegretFit& f) {
  auto line = [](const LinearFit& l) {
    return nlohmann::json{{"intercept", l.intercept}, {"slope", l.slope}, {"r_squared", l.r_squared}};
  };
  return {{"log_model", line(f.log_model)},
          {"sqrt_model", line(f.sqrt_model)},
          {"preferred", f.preferred},
          {"first_episode", f.first_episode},
          {"last_episode", f.last_episode}};
}

// ---- SVG -----------------------------------------------------------------

namespace detail {

inline std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

inline void svg_panel(std::ostringstream& out, double x0, double y0, double w, double h,
                      const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::string& xlabel, const std::string& title) {
  const double xmin = xs.front(), xmax = std::max(xs.back(), xs.front() + 1e-12);
  double ymax = 0.0;
  for (double y : ys) ymax = std::max(ymax, y);
  if (ymax <= 0.0) ymax = 1.0;
  out << "<g>\n";
  out << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(y0) << "\" width=\"" << fixed(w) << "\" height=\""
      << fixed(h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << fixed(x0 + w / 2) << "\" y=\"" << fixed(y0 - 8)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << title << "</text>\n";
  out << "<text x=\"" << fixed(x0 + w / 2) << "\" y=\"" << fixed(y0 + h + 28)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
  out << "<text x=\"" << fixed(x0 - 6) << "\" y=\"" << fixed(y0 + 4)
      << "\" text-anchor=\"end\" font-size=\"10\">" << fixed(ymax) << "</text>\n";
  out << "<text x=\"" << fixed(x0 - 6) << "\" y=\"" << fixed(y0 + h)
      << "\" text-anchor=\"end\" font-size=\"10\">0</text>\n";
  // Decimate to at most ~800 points; the polyline stays deterministic.
  const std::size_t stride = std::max<std::size_t>(1, xs.size() / 800);
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); i += stride) {
    const double px = x0 + (xs[i] - xmin) / (xmax - xmin) * w;
    const double py = y0 + h - ys[i] / ymax * h;
    out << fixed(px) << ',' << fixed(py) << ' ';
  }
  const double px = x0 + (xs.back() - xmin) / (xmax - xmin) * w;
  const double py = y0 + h - ys.back() / ymax * h;
  out << fixed(px) << ',' << fixed(py) << "\"/>\n</g>\n";
}

}  // namespace detail

/// Cumulative regret against the episode index and against ln(episode).
inline std::string trace_to_svg(const RegretTrace& t) {
  std::vector<double> k, lnk, y;
  for (const auto& e : t.episodes) {
    k.push_back(static_cast<double>(e.episode));
    lnk.push_back(std::log(static_cast<double>(e.episode)));
    y.push_back(e.cum_regret);
  }
  if (k.empty()) {
    k = {1.0};
    lnk = {0.0};
    y = {0.0};
  }
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"380\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"900\" height=\"380\" fill=\"white\"/>\n";
  out << "<text x=\"450\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << t.algorithm
      << " seed " << t.seed << " beta scale " << format_double(t.beta_scale) << "</text>\n";
  detail::svg_panel(out, 70, 50, 350, 270, k, y, "episode", "cumulative regret");
  detail::svg_panel(out, 520, 50, 350, 270, lnk, y, "ln(episode)", "cumulative regret vs ln k");
  out << "</svg>\n";
  return out.str();
}

// ---- files ---------------------------------------------------------------

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExportError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw ExportError("failed writing '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExportError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes `<stem>.csv|json|svg` under `dir` for each requested format.
inline std::vector<std::filesystem::path> export_trace(const RegretTrace& t, const std::filesystem::path& dir,
                                                       const std::string& stem,
                                                       const std::vector<std::string>& formats) {
  std::vector<std::filesystem::path> written;
  for (const auto& f : formats) {
    const auto path = dir / (stem + "." + f);
    if (f == "csv") {
      write_text(path, trace_to_csv(t));
    } else if (f == "json") {
      write_text(path, to_json(t).dump() + "\n");
    } else if (f == "svg") {
      write_text(path, trace_to_svg(t));
    } else {
      throw ValidationError("unknown export format '" + f + "'");
    }
    written.push_back(path);
  }
  return written;
}

inline RegretTrace import_trace(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + ex.what());
  }
  return trace_from_json(j);
}

}  // namespace linrl
