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

#include "json.hpp"
#include "linrl/common.hpp"
#include "linrl/linear_env.hpp"
#include "linrl/tabular.hpp"

namespace linrl {

/// First index attaining the maximum; ties resolve to the lowest action.
inline std::size_t argmax_action(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < values.size(); ++a)
    if (values[a] > values[best]) best = a;
  return best;
}

// Deterministic non-stationary policy pi(s, h), stored (h, s).
struct DeterministicPolicy {
  std::size_t num_states = 0;
  std::size_t horizon = 0;
  std::vector<std::size_t> actions;

  DeterministicPolicy() = default;
  DeterministicPolicy(std::size_t S, std::size_t H) : num_states(S), horizon(H), actions(S * H, 0) {}

  std::size_t& operator()(std::size_t h, std::size_t s) { return actions[h * num_states + s]; }
  std::size_t operator()(std::size_t h, std::size_t s) const { return actions[h * num_states + s]; }
};

// Randomized policy pi(a | s, h), stored (h, s, a).
struct StochasticPolicy {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::size_t horizon = 0;
  std::vector<double> probs;

  StochasticPolicy(std::size_t S, std::size_t A, std::size_t H)
      : num_states(S), num_actions(A), horizon(H), probs(S * A * H, 0.0) {}

  static StochasticPolicy uniform(std::size_t S, std::size_t A, std::size_t H) {
    StochasticPolicy p(S, A, H);
    std::fill(p.probs.begin(), p.probs.end(), 1.0 / static_cast<double>(A));
    return p;
  }

  double& operator()(std::size_t h, std::size_t s, std::size_t a) {
    return probs[(h * num_states + s) * num_actions + a];
  }
  double operator()(std::size_t h, std::size_t s, std::size_t a) const {
    return probs[(h * num_states + s) * num_actions + a];
  }
};

// Q and V tables over steps 0..H; row H is identically zero.
struct ValueTables {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::size_t horizon = 0;
  std::vector<double> q;  // (h, s, a), h in [0, H]
  std::vector<double> v;  // (h, s),    h in [0, H]

  ValueTables() = default;
  ValueTables(std::size_t S, std::size_t A, std::size_t H)
      : num_states(S), num_actions(A), horizon(H), q((H + 1) * S * A, 0.0), v((H + 1) * S, 0.0) {}

  double& Q(std::size_t h, std::size_t s, std::size_t a) {
    return q[(h * num_states + s) * num_actions + a];
  }
  double Q(std::size_t h, std::size_t s, std::size_t a) const {
    return q[(h * num_states + s) * num_actions + a];
  }
  double& V(std::size_t h, std::size_t s) { return v[h * num_states + s]; }
  double V(std::size_t h, std::size_t s) const { return v[h * num_states + s]; }

  std::span<const double> q_row(std::size_t h, std::size_t s) const {
    return {q.data() + (h * num_states + s) * num_actions, num_actions};
  }
  std::span<const double> v_row(std::size_t h) const { return {v.data() + h * num_states, num_states}; }
};

using PolicyValue = ValueTables;

struct ExactSolution : ValueTables {
  DeterministicPolicy policy;
  std::vector<double> gaps;  // (h, s, a), h in [0, H)
  double gap_min = kInf;

  using ValueTables::ValueTables;

  double gap(std::size_t h, std::size_t s, std::size_t a) const {
    return gaps[(h * num_states + s) * num_actions + a];
  }
  bool gap_min_defined() const { return std::isfinite(gap_min); }

  double require_gap_min() const {
    if (!gap_min_defined()) {
      throw OracleError("gap_min is undefined: every sub-optimality gap is zero");
    }
    return gap_min;
  }
};

namespace detail {

inline double expected_next(const TabularMdp& m, std::size_t h, std::size_t s, std::size_t a,
                            std::span<const double> next_values) {
  const auto row = m.row(h, s, a);
  double acc = 0.0;
  for (std::size_t n = 0; n < row.size(); ++n) acc += row[n] * next_values[n];
  return acc;
}

}  // namespace detail

// Backward induction with V*_H = 0. Greedy ties go to the lowest action.
inline ExactSolution solve_optimal(const TabularMdp& m) {
  const std::size_t S = m.num_states, A = m.num_actions, H = m.horizon;
  ExactSolution sol(S, A, H);
  sol.policy = DeterministicPolicy(S, H);
  sol.gaps.assign(H * S * A, 0.0);
  for (std::size_t hh = H; hh-- > 0;) {
    const auto next = sol.v_row(hh + 1);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a)
        sol.Q(hh, s, a) = m.reward(hh, s, a) + detail::expected_next(m, hh, s, a, next);
      const std::size_t best = argmax_action(sol.q_row(hh, s));
      sol.policy(hh, s) = best;
      sol.V(hh, s) = sol.Q(hh, s, best);
    }
  }
  double gmin = kInf;
  for (std::size_t h = 0; h < H; ++h)
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t a = 0; a < A; ++a) {
        const double g = std::max(0.0, sol.V(h, s) - sol.Q(h, s, a));
        sol.gaps[(h * S + s) * A + a] = g;
        if (g > kGapZeroTol) gmin = std::min(gmin, g);
      }
  sol.gap_min = gmin;
  return sol;
}

inline ExactSolution solve_optimal(const LinearMdpEnv& env) { return solve_optimal(env.to_tabular()); }
inline ExactSolution solve_optimal(const LinearMixtureEnv& env) { return solve_optimal(env.to_tabular()); }

inline PolicyValue evaluate_policy(const TabularMdp& m, const DeterministicPolicy& pi) {
  const std::size_t S = m.num_states, A = m.num_actions, H = m.horizon;
  require(pi.num_states == S && pi.horizon == H, "policy shape does not match the MDP");
  PolicyValue pv(S, A, H);
  for (std::size_t hh = H; hh-- > 0;) {
    const auto next = pv.v_row(hh + 1);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a)
        pv.Q(hh, s, a) = m.reward(hh, s, a) + detail::expected_next(m, hh, s, a, next);
      const std::size_t act = pi(hh, s);
      check_index(act, A, "policy action");
      pv.V(hh, s) = pv.Q(hh, s, act);
    }
  }
  return pv;
}

/// Exact evaluation of a randomized policy: V(s) = sum_a pi(a|s,h) Q(s,a).
inline PolicyValue evaluate_policy(const TabularMdp& m, const StochasticPolicy& pi) {
  const std::size_t S = m.num_states, A = m.num_actions, H = m.horizon;
  require(pi.num_states == S && pi.num_actions == A && pi.horizon == H,
          "policy shape does not match the MDP");
  PolicyValue pv(S, A, H);
  for (std::size_t hh = H; hh-- > 0;) {
    const auto next = pv.v_row(hh + 1);
    for (std::size_t s = 0; s < S; ++s) {
      double acc = 0.0, mass = 0.0;
      for (std::size_t a = 0; a < A; ++a) {
        pv.Q(hh, s, a) = m.reward(hh, s, a) + detail::expected_next(m, hh, s, a, next);
        const double p = pi(hh, s, a);
        require(p >= 0.0, "negative action probability");
        mass += p;
        acc += p * pv.Q(hh, s, a);
      }
      require(std::abs(mass - 1.0) <= 1e-9, "action probabilities do not sum to one");
      pv.V(hh, s) = acc;
    }
  }
  return pv;
}

/// V*_1(s1) - V^pi_1(s1).
inline double episode_regret(const ExactSolution& sol, const PolicyValue& pv, std::size_t s1) {
  check_index(s1, sol.num_states, "start state");
  const double r = sol.V(0, s1) - pv.V(0, s1);
  if (r < -1e-10) {
    throw OracleError("policy value exceeds the optimum by " + std::to_string(-r));
  }
  return r;
}

/// E[sum_h gap_h(s_h, pi(s_h, h))] from s1, by forward propagation of the
/// state distribution. Equals episode_regret for the same policy.
inline double expected_gap_sum(const TabularMdp& m, const ExactSolution& sol,
                               const DeterministicPolicy& pi, std::size_t s1) {
  const std::size_t S = m.num_states, H = m.horizon;
  check_index(s1, S, "start state");
  std::vector<double> dist(S, 0.0), next(S, 0.0);
  dist[s1] = 1.0;
  double total = 0.0;
  for (std::size_t h = 0; h < H; ++h) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      if (dist[s] == 0.0) continue;
      const std::size_t a = pi(h, s);
      check_index(a, m.num_actions, "policy action");
      total += dist[s] * sol.gap(h, s, a);
      const auto row = m.row(h, s, a);
      for (std::size_t n = 0; n < S; ++n) next[n] += dist[s] * row[n];
    }
    std::swap(dist, next);
  }
  return total;
}

/// Greedy policy of a set of Q tables (rows 0..H-1).
inline DeterministicPolicy greedy_policy(const ValueTables& tables) {
  DeterministicPolicy pi(tables.num_states, tables.horizon);
  for (std::size_t h = 0; h < tables.horizon; ++h)
    for (std::size_t s = 0; s < tables.num_states; ++s) pi(h, s) = argmax_action(tables.q_row(h, s));
  return pi;
}

/// Max |Q*_h(s,a) - r_h(s,a) - [P_h V*_{h+1}](s,a)| over all entries.
inline double bellman_residual(const TabularMdp& m, const ExactSolution& sol) {
  double worst = 0.0;
  for (std::size_t h = 0; h < m.horizon; ++h)
    for (std::size_t s = 0; s < m.num_states; ++s) {
      for (std::size_t a = 0; a < m.num_actions; ++a) {
        const double rhs = m.reward(h, s, a) + detail::expected_next(m, h, s, a, sol.v_row(h + 1));
        worst = std::max(worst, std::abs(sol.Q(h, s, a) - rhs));
      }
      const auto row = sol.q_row(h, s);
      worst = std::max(worst, std::abs(sol.V(h, s) - *std::max_element(row.begin(), row.end())));
    }
  return worst;
}

// Steps in the export are one-based to match the usual episode notation.
inline nlohmann::json to_json(const ExactSolution& sol) {
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t h = 0; h < sol.horizon; ++h) {
    nlohmann::json q = nlohmann::json::array(), v = nlohmann::json::array(),
                   g = nlohmann::json::array(), pi = nlohmann::json::array();
    for (std::size_t s = 0; s < sol.num_states; ++s) {
      nlohmann::json qs = nlohmann::json::array(), gs = nlohmann::json::array();
      for (std::size_t a = 0; a < sol.num_actions; ++a) {
        qs.push_back(sol.Q(h, s, a));
        gs.push_back(sol.gap(h, s, a));
      }
      q.push_back(std::move(qs));
      g.push_back(std::move(gs));
      v.push_back(sol.V(h, s));
      pi.push_back(sol.policy(h, s));
    }
    steps.push_back({{"step", h + 1}, {"q", q}, {"v", v}, {"gap", g}, {"policy", pi}});
  }
  nlohmann::json out{{"schema_version", 1},
                     {"kind", "exact_solution"},
                     {"dims", {{"S", sol.num_states}, {"A", sol.num_actions}, {"H", sol.horizon}}},
                     {"steps", steps}};
  if (sol.gap_min_defined()) {
    out["gap_min"] = sol.gap_min;
  } else {
    out["gap_min"] = nullptr;
  }
  return out;
}

}  // namespace linrl
