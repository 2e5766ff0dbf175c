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
#include <vector>

#include "linrl/common.hpp"
#include "linrl/dp_oracle.hpp"
#include "linrl/rng.hpp"
#include "linrl/tabular.hpp"

namespace linrl {

// One realized episode: states s_1..s_{H+1} and actions a_1..a_H
// (zero-based: states[h] is visited at step h, states[H] is terminal).
struct Trajectory {
  std::vector<std::size_t> states;
  std::vector<std::size_t> actions;

  std::size_t horizon() const { return actions.size(); }

  void validate(std::size_t S, std::size_t A, std::size_t H) const {
    require(actions.size() == H && states.size() == H + 1, "malformed trajectory length");
    for (auto s : states) check_index(s, S, "trajectory state");
    for (auto a : actions) check_index(a, A, "trajectory action");
  }
};

/// Samples a start state and H transitions under `pi` using `rng`.
inline Trajectory rollout(const TabularMdp& m, const DeterministicPolicy& pi, Rng& rng) {
  Trajectory t;
  t.states.reserve(m.horizon + 1);
  t.actions.reserve(m.horizon);
  std::size_t s = rng.categorical(m.initial_distribution);
  t.states.push_back(s);
  for (std::size_t h = 0; h < m.horizon; ++h) {
    const std::size_t a = pi(h, s);
    t.actions.push_back(a);
    s = rng.categorical(m.row(h, s, a));
    t.states.push_back(s);
  }
  return t;
}

}  // namespace linrl
