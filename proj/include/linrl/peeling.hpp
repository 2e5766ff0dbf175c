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
#include <cstddef>
#include <string>
#include <vector>

#include "linrl/common.hpp"
#include "linrl/dp_oracle.hpp"
#include "linrl/experiment.hpp"

namespace linrl {

/// Constant used for the LSVI-UCB count bound C d^3 H^4 log(2dT/delta) / (4^n gap^2).
/// Obtained by solving 2^n g K' <= sqrt(2K'H^2 log(1/delta)) + 2H beta sqrt(2K'd log(K'+1))
/// with beta = 78 d H sqrt(log(2dT/delta)) for K'.
inline constexpr double kLsviCountConstant = 194696.0;

// Right-hand side of the per-(h, n) count bound for each algorithm:
//   lsvi-ucb: X = C d^3 H^4 log(2dT/delta) / (4^n gap^2)
//   ucrl-vtr: X = 512 C_theta^2 d^2 H^4 log^3(2dT/delta) / (4^n gap^2)
// and the bound is X log X (X when log X < 1).
struct CountBoundParams {
  std::string algorithm = "lsvi-ucb";
  std::size_t dim = 1;
  std::size_t horizon = 1;
  double total_steps = 1.0;  // T = K H
  double delta = 0.01;
  double c_theta = 1.0;

  double bound(std::size_t n, double gap_min) const {
    const double d = static_cast<double>(dim), H = static_cast<double>(horizon);
    const double L = std::log(2.0 * d * total_steps / delta);
    const double scale = std::pow(4.0, static_cast<double>(n)) * gap_min * gap_min;
    double x;
    if (algorithm == "lsvi-ucb") {
      x = kLsviCountConstant * d * d * d * std::pow(H, 4) * L / scale;
    } else {
      x = 512.0 * c_theta * c_theta * d * d * std::pow(H, 4) * L * L * L / scale;
    }
    return x * std::max(1.0, std::log(x));
  }

  static CountBoundParams from_trace(const RegretTrace& t) {
    CountBoundParams p;
    p.algorithm = t.algorithm;
    p.dim = t.feature_dim;
    p.horizon = t.horizon;
    p.total_steps = static_cast<double>(t.episodes.size() * t.horizon);
    p.delta = t.delta;
    p.c_theta = t.c_theta;
    return p;
  }
};

// Dyadic peeling of realized sub-optimalities.
//   interval[h][i-1]: episodes with gap_h(s_h^k, a_h^k) in [2^{i-1} g, 2^i g), i = 1..N
//   threshold[h][n]:  episodes with V*_h(s_h^k) - Q^{pi_k}_h(s_h^k, a_h^k) >= 2^n g, n = 0..N
// first_half / second_half split threshold counts at episode floor(K/2).
struct GapIntervalCounts {
  double gap_min = 0.0;
  std::size_t horizon = 0;
  std::size_t num_intervals = 0;  // N = ceil(log2(H / gap_min))
  std::vector<std::vector<std::size_t>> interval;
  std::vector<std::vector<std::size_t>> threshold;
  std::vector<std::vector<std::size_t>> threshold_first_half;
  std::vector<std::vector<std::size_t>> threshold_second_half;
  std::vector<double> bound;  // per n, identical for every h

  double level(std::size_t n) const { return std::ldexp(gap_min, static_cast<int>(n)); }

  bool within_bounds() const {
    for (const auto& row : threshold)
      for (std::size_t n = 0; n < row.size(); ++n)
        if (static_cast<double>(row[n]) > bound[n]) return false;
    return true;
  }
};

inline GapIntervalCounts count_gap_intervals(const RegretTrace& trace, double gap_min,
                                             const CountBoundParams& bound_params) {
  if (!(gap_min > 0.0) || !std::isfinite(gap_min)) {
    throw OracleError("peeling counts need a finite positive gap_min");
  }
  GapIntervalCounts c;
  c.gap_min = gap_min;
  c.horizon = trace.horizon;
  const double H = static_cast<double>(trace.horizon);
  c.num_intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(std::log2(H / gap_min))));
  const std::size_t N = c.num_intervals;
  c.interval.assign(c.horizon, std::vector<std::size_t>(N, 0));
  c.threshold.assign(c.horizon, std::vector<std::size_t>(N + 1, 0));
  c.threshold_first_half = c.threshold;
  c.threshold_second_half = c.threshold;
  const std::size_t K = trace.episodes.size();
  const std::size_t half = K / 2;
  for (const auto& rec : trace.episodes) {
    for (std::size_t h = 0; h < c.horizon; ++h) {
      const double g = rec.gaps.at(h);
      if (g > kGapZeroTol) {
        // smallest i >= 1 with g < 2^i g_min; g >= g_min since g_min is the smallest positive gap
        std::size_t i = 1;
        while (std::ldexp(gap_min, static_cast<int>(i)) <= g) ++i;
        if (i == N + 1 && g <= c.level(N)) i = N;  // the top interval is closed at H
        if (i <= N) ++c.interval[h][i - 1];
      }
      const double sub = rec.suboptimality.at(h);
      for (std::size_t n = 0; n <= N; ++n) {
        if (sub >= c.level(n) * (1.0 - 1e-12)) {
          ++c.threshold[h][n];
          if (rec.episode <= half) {
            ++c.threshold_first_half[h][n];
          } else {
            ++c.threshold_second_half[h][n];
          }
        }
      }
    }
  }
  c.bound.resize(N + 1);
  for (std::size_t n = 0; n <= N; ++n) c.bound[n] = bound_params.bound(n, gap_min);
  return c;
}

inline GapIntervalCounts count_gap_intervals(const RegretTrace& trace, const ExactSolution& sol) {
  return count_gap_intervals(trace, sol.require_gap_min(), CountBoundParams::from_trace(trace));
}

}  // namespace linrl
