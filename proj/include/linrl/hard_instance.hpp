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
#include <optional>
#include <vector>

#include "linrl/common.hpp"
#include "linrl/linear_env.hpp"
#include "linrl/tabular.hpp"

namespace linrl {

// Parameters of the escape-chain family used for the regret lower bounds.
//
// States s_1..s_{H+2} (indices 0..H+1); s_{H+1} and s_{H+2} absorb. Actions
// are the sign vectors {-1,1}^{d-1}. From a chain state s_j every action
// escapes to s_{H+2} with probability delta + <mu_h, a> and otherwise moves
// to s_{j+1}. Reward is 1 in s_{H+2} and 0 elsewhere.
struct HardInstanceSpec {
  std::size_t d = 2;
  std::size_t horizon = 3;
  double gap = 0.05;                   // Delta
  std::optional<double> escape;        // delta; defaults to 1/H
  std::vector<std::vector<int>> signs; // per-step signs of mu_h; empty = alternating +,-,+,...
  // When set, require the lower-bound conditions 3(d-1)Delta <= delta <= 1/3
  // and H >= 3. When cleared only the kernel needs to be a valid distribution.
  bool lower_bound_conditions = true;

  double escape_probability() const {
    return escape.value_or(1.0 / static_cast<double>(horizon));
  }

  std::size_t num_actions() const { return std::size_t{1} << (d - 1); }
  std::size_t num_states() const { return horizon + 2; }

  std::vector<int> step_signs(std::size_t h) const {
    if (!signs.empty()) return signs[h];
    std::vector<int> out(d - 1);
    for (std::size_t j = 0; j + 1 < d; ++j) out[j] = (j % 2 == 0) ? 1 : -1;
    return out;
  }

  void validate() const {
    require(d >= 2, "hard instance needs d >= 2");
    require(d <= 20, "hard instance action set too large (d > 20)");
    require(gap > 0.0 && std::isfinite(gap), "hard instance needs Delta > 0");
    const double esc = escape_probability();
    const double spread = static_cast<double>(d - 1) * gap;
    if (lower_bound_conditions) {
      require(horizon >= 3, "hard instance needs H >= 3");
      require(3.0 * spread <= esc + 1e-15,
              "infeasible hard instance: 3(d-1)Delta = " + std::to_string(3.0 * spread) +
                  " exceeds delta = " + std::to_string(esc));
      require(esc <= 1.0 / 3.0 + 1e-15, "infeasible hard instance: delta > 1/3");
    } else {
      require(horizon >= 2, "hard instance needs H >= 2");
      require(esc - spread >= 0.0 && esc + spread <= 1.0,
              "hard instance escape probabilities leave [0,1]");
    }
    if (!signs.empty()) {
      require(signs.size() == horizon, "need one sign vector per step");
      for (const auto& row : signs) {
        require(row.size() == d - 1, "sign vectors must have d-1 entries");
        for (int x : row) require(x == 1 || x == -1, "signs must be +1 or -1");
      }
    }
  }
};

/// Action index -> sign vector: bit j set means coordinate j is -1.
inline std::vector<int> hard_action_vector(std::size_t d, std::size_t index) {
  std::vector<int> a(d - 1);
  for (std::size_t j = 0; j + 1 < d; ++j) a[j] = ((index >> j) & 1U) ? -1 : 1;
  return a;
}

inline std::size_t hard_action_index(const std::vector<int>& a) {
  std::size_t index = 0;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] < 0) index |= std::size_t{1} << j;
  return index;
}

struct HardInstance {
  HardInstanceSpec spec;
  TabularMdp tabular;
  LinearMdpEnv linear;      // dimension H*d + 2
  LinearMixtureEnv mixture; // dimension d
  std::vector<std::vector<double>> mu;  // per step, d-1 entries

  std::size_t chain_state(std::size_t j) const { return j; }  // s_{j+1}
  std::size_t dead_end() const { return spec.horizon; }        // s_{H+1}
  std::size_t goal() const { return spec.horizon + 1; }        // s_{H+2}

  /// The action a* = mu_h / Delta.
  std::size_t optimal_action(std::size_t h) const { return hard_action_index(spec.step_signs(h)); }
};

namespace detail {

inline double signed_dot(const std::vector<double>& mu, const std::vector<int>& a) {
  double acc = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) acc += mu[j] * a[j];
  return acc;
}

}  // namespace detail

// Builds the tabular kernel and two exact linear encodings of it.
//
// Linear MDP view: each chain state s_j owns a block of d coordinates with
// phi(s_j, a) = (1, a)/sqrt(d); the two absorbing states own one coordinate
// each. Block j of theta_h carries sqrt(d)(1-delta, -mu_h) on the successor
// s_{j+1} and sqrt(d)(delta, mu_h) on s_{H+2}.
//
// Mixture view (dimension d): theta*_h = sqrt(d)(1, mu_h),
// phi(s_{H+2}|s_j,a) = (delta, a)/sqrt(d), phi(s_{j+1}|s_j,a) = (1-delta, -a)/sqrt(d),
// phi(s|s,a) = (1, 0)/sqrt(d) on the absorbing states. This keeps
// ||phi_V|| <= 1 for V in [0,1] and gives C_theta = sqrt(d (1 + (d-1)Delta^2)).
inline HardInstance make_hard_instance(const HardInstanceSpec& spec) {
  spec.validate();
  const std::size_t H = spec.horizon, d = spec.d;
  const std::size_t S = spec.num_states(), A = spec.num_actions();
  const double esc = spec.escape_probability();
  const double root_d = std::sqrt(static_cast<double>(d));

  HardInstance inst;
  inst.spec = spec;
  inst.mu.resize(H);
  for (std::size_t h = 0; h < H; ++h) {
    const auto sg = spec.step_signs(h);
    inst.mu[h].resize(d - 1);
    for (std::size_t j = 0; j + 1 < d; ++j) inst.mu[h][j] = spec.gap * sg[j];
  }
  std::vector<std::vector<int>> actions(A);
  for (std::size_t i = 0; i < A; ++i) actions[i] = hard_action_vector(d, i);

  const std::size_t dead = H, goal = H + 1;

  TabularMdp tab(S, A, H);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        if (s == dead || s == goal) {
          tab.prob(h, s, a, s) = 1.0;
        } else {
          const double p_escape = esc + detail::signed_dot(inst.mu[h], actions[a]);
          tab.prob(h, s, a, goal) = p_escape;
          tab.prob(h, s, a, s + 1) = 1.0 - p_escape;
        }
        tab.reward(h, s, a) = (s == goal) ? 1.0 : 0.0;
      }
    }
  }
  tab.initial_distribution[0] = 1.0;
  tab.validate();

  const std::size_t D = H * d + 2;
  const std::size_t dead_coord = H * d, goal_coord = H * d + 1;
  LinearMdpEnv lin(S, A, H, D);
  lin.construction = "hard_instance";
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      double* f = lin.phi_data(s, a);
      if (s == dead) {
        f[dead_coord] = 1.0;
      } else if (s == goal) {
        f[goal_coord] = 1.0;
      } else {
        f[s * d] = 1.0 / root_d;
        for (std::size_t j = 0; j + 1 < d; ++j) f[s * d + 1 + j] = actions[a][j] / root_d;
      }
    }
  }
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t j = 0; j < H; ++j) {
      double* succ = lin.theta_data(h, j + 1);
      double* esc_vec = lin.theta_data(h, goal);
      succ[j * d] = root_d * (1.0 - esc);
      esc_vec[j * d] = root_d * esc;
      for (std::size_t c = 0; c + 1 < d; ++c) {
        succ[j * d + 1 + c] = -root_d * inst.mu[h][c];
        esc_vec[j * d + 1 + c] = root_d * inst.mu[h][c];
      }
    }
    lin.theta_data(h, dead)[dead_coord] = 1.0;
    lin.theta_data(h, goal)[goal_coord] = 1.0;
    lin.mu_data(h)[goal_coord] = 1.0;
  }
  lin.initial_distribution = tab.initial_distribution;
  lin.validate();

  LinearMixtureEnv mix(S, A, H, d);
  mix.construction = "hard_instance";
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      if (s == dead || s == goal) {
        mix.phi_data(s, a, s)[0] = 1.0 / root_d;
      } else {
        double* to_goal = mix.phi_data(s, a, goal);
        double* to_next = mix.phi_data(s, a, s + 1);
        to_goal[0] = esc / root_d;
        to_next[0] = (1.0 - esc) / root_d;
        for (std::size_t j = 0; j + 1 < d; ++j) {
          to_goal[1 + j] = actions[a][j] / root_d;
          to_next[1 + j] = -actions[a][j] / root_d;
        }
      }
      mix.reward(s, a) = (s == goal) ? 1.0 : 0.0;
    }
  }
  double max_theta_norm = 0.0;
  for (std::size_t h = 0; h < H; ++h) {
    double* t = mix.theta_data(h);
    t[0] = root_d;
    for (std::size_t j = 0; j + 1 < d; ++j) t[1 + j] = root_d * inst.mu[h][j];
    max_theta_norm = std::max(max_theta_norm, mix.theta(h).norm());
  }
  mix.c_theta = max_theta_norm;
  mix.initial_distribution = tab.initial_distribution;
  mix.validate();

  inst.tabular = std::move(tab);
  inst.linear = std::move(lin);
  inst.mixture = std::move(mix);
  return inst;
}

}  // namespace linrl
