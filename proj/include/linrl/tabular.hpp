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
#include <span>
#include <string>
#include <vector>

#include "linrl/common.hpp"

namespace linrl {

// Ground-truth finite-horizon MDP. Steps are zero-based internally:
// h = 0 is the first step of an episode and h = H - 1 the last.
// Transition storage is row-major over (h, s, a, s').
struct TabularMdp {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::size_t horizon = 0;
  std::vector<double> transitions;
  std::vector<double> rewards;  // (h, s, a)
  std::vector<double> initial_distribution;

  TabularMdp() = default;
  TabularMdp(std::size_t S, std::size_t A, std::size_t H)
      : num_states(S),
        num_actions(A),
        horizon(H),
        transitions(H * S * A * S, 0.0),
        rewards(H * S * A, 0.0),
        initial_distribution(S, 0.0) {}

  std::size_t sa_index(std::size_t s, std::size_t a) const { return s * num_actions + a; }

  std::size_t row_offset(std::size_t h, std::size_t s, std::size_t a) const {
    check_index(h, horizon, "step");
    check_index(s, num_states, "state");
    check_index(a, num_actions, "action");
    return ((h * num_states + s) * num_actions + a) * num_states;
  }

  double& prob(std::size_t h, std::size_t s, std::size_t a, std::size_t next) {
    check_index(next, num_states, "state");
    return transitions[row_offset(h, s, a) + next];
  }
  double prob(std::size_t h, std::size_t s, std::size_t a, std::size_t next) const {
    check_index(next, num_states, "state");
    return transitions[row_offset(h, s, a) + next];
  }

  std::span<const double> row(std::size_t h, std::size_t s, std::size_t a) const {
    return {transitions.data() + row_offset(h, s, a), num_states};
  }

  double& reward(std::size_t h, std::size_t s, std::size_t a) {
    return rewards[(h * num_states + s) * num_actions + a];
  }
  double reward(std::size_t h, std::size_t s, std::size_t a) const {
    return rewards[(h * num_states + s) * num_actions + a];
  }

  void check_indices(std::size_t h, std::size_t s, std::size_t a) const {
    check_index(h, horizon, "step");
    check_index(s, num_states, "state");
    check_index(a, num_actions, "action");
  }

  /// Throws ValidationError unless every kernel row is a probability
  /// vector, rewards lie in [0, 1] and the initial distribution sums to one.
  void validate() const {
    require(num_states >= 1 && num_actions >= 1 && horizon >= 1,
            "tabular MDP needs S, A, H >= 1");
    require(transitions.size() == horizon * num_states * num_actions * num_states,
            "transition tensor has wrong size");
    require(rewards.size() == horizon * num_states * num_actions, "reward table has wrong size");
    require(initial_distribution.size() == num_states, "initial distribution has wrong size");
    for (std::size_t h = 0; h < horizon; ++h) {
      for (std::size_t s = 0; s < num_states; ++s) {
        for (std::size_t a = 0; a < num_actions; ++a) {
          double total = 0.0;
          for (double p : row(h, s, a)) {
            require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "transition entry outside [0,1]");
            total += p;
          }
          require(std::abs(total - 1.0) <= kProbTol,
                  "transition row (h=" + std::to_string(h) + ", s=" + std::to_string(s) +
                      ", a=" + std::to_string(a) + ") sums to " + std::to_string(total));
          const double r = reward(h, s, a);
          require(std::isfinite(r) && r >= 0.0 && r <= 1.0, "reward outside [0,1]");
        }
      }
    }
    double total = 0.0;
    for (double p : initial_distribution) {
      require(std::isfinite(p) && p >= 0.0, "negative initial probability");
      total += p;
    }
    require(std::abs(total - 1.0) <= kProbTol, "initial distribution does not sum to one");
  }
};

/// Largest absolute entrywise difference between two kernels of equal shape.
inline double max_kernel_deviation(const TabularMdp& x, const TabularMdp& y) {
  require(x.transitions.size() == y.transitions.size(), "kernel shapes differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.transitions.size(); ++i) {
    worst = std::max(worst, std::abs(x.transitions[i] - y.transitions[i]));
  }
  return worst;
}

}  // namespace linrl
