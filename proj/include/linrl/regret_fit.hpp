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

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "linrl/common.hpp"
#include "linrl/experiment.hpp"

namespace linrl {

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

// Cumulative regret over the second half of a run fitted by
// Regret(k) ~ a + b ln k and Regret(k) ~ a + b sqrt k.
struct RegretFit {
  LinearFit log_model;
  LinearFit sqrt_model;
  std::string preferred;  // "log" or "sqrt"
  std::size_t first_episode = 0;
  std::size_t last_episode = 0;
};

/// Ordinary least squares y ~ a + b x with R^2 = 1 - SS_res / SS_tot.
inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0.0) throw OracleError("degenerate regret trace: zero variance in the fitted window");
  if (sxx == 0.0) throw OracleError("degenerate regressor");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r_squared = 1.0 - ss_res / syy;
  return f;
}

/// Fits both models to cumulative regret (one value per episode, episode k at
/// index k-1) over episodes [ceil(K/2), K].
inline RegretFit fit_regret_models(const std::vector<double>& cumulative) {
  const std::size_t K = cumulative.size();
  if (K < 100) throw ValidationError("regret fits need at least 100 episodes");
  RegretFit fit;
  fit.first_episode = (K + 1) / 2;
  fit.last_episode = K;
  std::vector<double> xl, xs, y;
  for (std::size_t k = fit.first_episode; k <= K; ++k) {
    xl.push_back(std::log(static_cast<double>(k)));
    xs.push_back(std::sqrt(static_cast<double>(k)));
    y.push_back(cumulative[k - 1]);
  }
  fit.log_model = fit_line(xl, y);
  fit.sqrt_model = fit_line(xs, y);
  fit.preferred = fit.log_model.r_squared >= fit.sqrt_model.r_squared ? "log" : "sqrt";
  return fit;
}

inline RegretFit fit_regret_models(const RegretTrace& trace) {
  std::vector<double> cum;
  cum.reserve(trace.episodes.size());
  for (const auto& e : trace.episodes) cum.push_back(e.cum_regret);
  return fit_regret_models(cum);
}

}  // namespace linrl
