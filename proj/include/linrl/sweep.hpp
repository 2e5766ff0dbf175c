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

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "linrl/config.hpp"
#include "linrl/experiment.hpp"

namespace linrl {

struct SweepCell {
  double beta_scale = 1.0;
  std::vector<RegretTrace> traces;  // one per seed, in seed order

  double mean_final_regret() const {
    double acc = 0.0;
    for (const auto& t : traces) acc += t.cumulative_regret();
    return traces.empty() ? 0.0 : acc / static_cast<double>(traces.size());
  }
};

struct SweepResult {
  std::vector<SweepCell> cells;  // in the order of the configured scales
  std::size_t tuned = 0;         // index of the selected cell

  const SweepCell& tuned_cell() const { return cells.at(tuned); }
};

// Runs the configured seeds for every beta scale. The tuned scale is the one
// with the lowest mean final cumulative regret; ties keep the earlier scale.
inline SweepResult run_sweep(const ExperimentConfig& base) {
  base.validate();
  SweepResult out;
  double best = std::numeric_limits<double>::infinity();
  for (double scale : base.sweep_beta_scales) {
    ExperimentConfig cfg = base;
    cfg.hyper.beta_scale = scale;
    SweepCell cell;
    cell.beta_scale = scale;
    cell.traces = run_experiment(cfg);
    const double m = cell.mean_final_regret();
    if (m < best) {
      best = m;
      out.tuned = out.cells.size();
    }
    out.cells.push_back(std::move(cell));
  }
  return out;
}

}  // namespace linrl
