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
#include <cstdint>
#include <vector>

#include "linrl/common.hpp"
#include "linrl/linear_env.hpp"
#include "linrl/rng.hpp"
#include "linrl/tabular.hpp"

namespace linrl {

namespace detail {

inline void require_dims(std::size_t d, std::size_t S, std::size_t A, std::size_t H) {
  require(d >= 1, "feature dimension must be >= 1");
  require(S >= 1 && A >= 1 && H >= 1, "S, A and H must be >= 1");
}

inline std::vector<double> uniform_distribution(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

}  // namespace detail

// Anchor-mixture construction: d anchor distributions per step, features on
// the simplex, theta_h(s')_j = p_j(s'|h). Any feature on the simplex yields a
// convex combination of distributions, hence a valid kernel.
inline LinearMdpEnv make_random_linear_mdp(std::size_t d, std::size_t S, std::size_t A,
                                           std::size_t H, std::uint64_t seed) {
  detail::require_dims(d, S, A, H);
  Rng rng(seed, 0x4C4D4450ULL);
  LinearMdpEnv env(S, A, H, d);
  env.construction = "random_linear_mdp";
  env.seed = seed;
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t j = 0; j < d; ++j) {
      auto anchor = rng.simplex(S);
      for (std::size_t next = 0; next < S; ++next) env.theta_data(h, next)[j] = anchor[next];
    }
  }
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      auto w = rng.simplex(d);
      std::copy(w.begin(), w.end(), env.phi_data(s, a));
    }
  }
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t j = 0; j < d; ++j) env.mu_data(h)[j] = rng.uniform();
  }
  env.initial_distribution = detail::uniform_distribution(S);
  env.validate();
  return env;
}

// d base kernels P_j(s'|s,a) shared across steps; theta*_h = sqrt(d) w_h with
// w_h on the simplex; phi(s'|s,a) = (P_1, ..., P_d) / sqrt(d).
inline LinearMixtureEnv make_random_linear_mixture(std::size_t d, std::size_t S, std::size_t A,
                                                   std::size_t H, std::uint64_t seed) {
  detail::require_dims(d, S, A, H);
  Rng rng(seed, 0x4C4D4958ULL);
  LinearMixtureEnv env(S, A, H, d);
  env.construction = "random_linear_mixture";
  env.seed = seed;
  const double root_d = std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        auto row = rng.simplex(S);
        for (std::size_t next = 0; next < S; ++next)
          env.phi_data(s, a, next)[j] = row[next] / root_d;
      }
    }
  }
  for (std::size_t h = 0; h < H; ++h) {
    auto w = rng.simplex(d);
    for (std::size_t j = 0; j < d; ++j) env.theta_data(h)[j] = root_d * w[j];
  }
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t a = 0; a < A; ++a) env.reward(s, a) = rng.uniform();
  env.c_theta = root_d;
  env.initial_distribution = detail::uniform_distribution(S);
  env.validate();
  return env;
}

/// Random tabular MDP with Dirichlet rows and uniform rewards.
inline TabularMdp make_random_tabular(std::size_t S, std::size_t A, std::size_t H,
                                      std::uint64_t seed) {
  detail::require_dims(1, S, A, H);
  Rng rng(seed, 0x54414255ULL);
  TabularMdp tab(S, A, H);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        auto row = rng.simplex(S);
        std::copy(row.begin(), row.end(), tab.transitions.begin() + tab.row_offset(h, s, a));
        tab.reward(h, s, a) = rng.uniform();
      }
    }
  }
  tab.initial_distribution = detail::uniform_distribution(S);
  tab.validate();
  return tab;
}

// Tabular MDP as a linear MDP with d = S*A: phi(s,a) = e_(s,a),
// theta_h(s')_(s,a) = P_h(s'|s,a), mu_h = r_h(., .).
inline LinearMdpEnv tabular_one_hot_embed(const TabularMdp& tab) {
  tab.validate();
  const std::size_t S = tab.num_states, A = tab.num_actions, H = tab.horizon;
  const std::size_t d = S * A;
  LinearMdpEnv env(S, A, H, d);
  env.construction = "tabular_one_hot";
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t a = 0; a < A; ++a) env.phi_data(s, a)[tab.sa_index(s, a)] = 1.0;
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        const std::size_t j = tab.sa_index(s, a);
        for (std::size_t next = 0; next < S; ++next) env.theta_data(h, next)[j] = tab.prob(h, s, a, next);
        env.mu_data(h)[j] = tab.reward(h, s, a);
      }
    }
  }
  env.initial_distribution = tab.initial_distribution;
  env.validate();
  return env;
}

}  // namespace linrl
