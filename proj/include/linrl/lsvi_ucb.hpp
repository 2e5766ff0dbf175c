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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "linrl/common.hpp"
#include "linrl/dp_oracle.hpp"
#include "linrl/episode.hpp"
#include "linrl/gram.hpp"
#include "linrl/linear_env.hpp"

namespace linrl {

/// c * 78 d H sqrt(ln(2 d T / delta)).
inline double lsvi_beta(std::size_t d, std::size_t H, double T, double delta, double scale = 1.0) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  require(d >= 1 && H >= 1 && T >= 1.0, "lsvi_beta needs d, H, T >= 1");
  require(scale >= 0.0 && std::isfinite(scale), "beta scale must be non-negative");
  return scale * 78.0 * static_cast<double>(d) * static_cast<double>(H) *
         std::sqrt(std::log(2.0 * static_cast<double>(d) * T / delta));
}

/// delta = 1 / (2 K (K+1) H^3), the choice used for expected-regret bounds.
inline double expected_regret_delta(std::size_t K, std::size_t H) {
  const double k = static_cast<double>(K), h = static_cast<double>(H);
  return 1.0 / (2.0 * k * (k + 1.0) * h * h * h);
}

// Q functions produced by one LSVI-UCB planning pass. Tables are
// materialized over the whole finite state space; q_value() evaluates the
// closed form for any feature vector.
struct LsviPlan {
  double beta = 0.0;
  double clip = 0.0;
  std::vector<Eigen::VectorXd> weights;  // w_h
  ValueTables tables;                    // Q_h(s,a), V_h(s) = max_a Q_h(s,a)
  std::vector<double> bonus;             // beta sqrt(phi^T Lambda_h^{-1} phi), (h, s, a)

  double bonus_at(std::size_t h, std::size_t s, std::size_t a) const {
    return bonus[(h * tables.num_states + s) * tables.num_actions + a];
  }
};

// Least-squares value iteration with an elliptical UCB bonus on a linear MDP.
//
// Per step h the agent keeps the Gram matrix of the visited features and a
// count table over observed (s, a, s') transitions. Regression targets
// r + max_a Q_{h+1}(s', a) depend only on the transition, so the sum
// sum_i phi_i y_i over the full history is evaluated exactly from the counts
// against the current Q_{h+1} on every planning pass.
class LsviAgent {
 public:
  struct Step {
    std::size_t state;
    std::size_t action;
    std::size_t next_state;
  };

  LsviAgent(const LinearMdpEnv& env, double beta, double lambda = 1.0)
      : env_(&env), beta_(beta), lambda_(lambda) {
    require(beta >= 0.0 && std::isfinite(beta), "beta must be non-negative");
    require(lambda > 0.0, "lambda must be positive");
    const std::size_t S = env.num_states, A = env.num_actions, H = env.horizon;
    grams_.assign(H, GramState(env.dim, lambda));
    counts_.assign(H, std::vector<std::size_t>(S * A * S, 0));
    replay_.resize(H);
    rewards_.resize(H * S * A);
    for (std::size_t h = 0; h < H; ++h)
      for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) rewards_[(h * S + s) * A + a] = env.reward(h, s, a);
  }

  const LinearMdpEnv& env() const { return *env_; }
  double beta() const { return beta_; }
  double lambda() const { return lambda_; }
  std::size_t episodes() const { return episodes_; }
  const GramState& gram(std::size_t h) const { return grams_.at(h); }
  const std::vector<Step>& replay(std::size_t h) const { return replay_.at(h); }
  double reward(std::size_t h, std::size_t s, std::size_t a) const {
    return rewards_[(h * env_->num_states + s) * env_->num_actions + a];
  }

  /// sum_i phi(s_h^i, a_h^i) [r_h + max_a Q_{h+1}(s_{h+1}^i, a)] for a given V_{h+1}.
  Eigen::VectorXd regression_target(std::size_t h, std::span<const double> next_values) const {
    const std::size_t S = env_->num_states, A = env_->num_actions;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(env_->dim));
    const auto& cnt = counts_[h];
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        const std::size_t* row = cnt.data() + (s * A + a) * S;
        double weight = 0.0;
        std::size_t visits = 0;
        for (std::size_t n = 0; n < S; ++n) {
          if (row[n] == 0) continue;
          visits += row[n];
          weight += static_cast<double>(row[n]) * next_values[n];
        }
        if (visits == 0) continue;
        weight += static_cast<double>(visits) * reward(h, s, a);
        b += weight * env_->phi(s, a);
      }
    }
    return b;
  }

  /// Backward pass h = H..1 producing Q_h^k for the upcoming episode.
  LsviPlan plan() const {
    const std::size_t S = env_->num_states, A = env_->num_actions, H = env_->horizon;
    LsviPlan p;
    p.beta = beta_;
    p.clip = static_cast<double>(H);
    p.weights.resize(H);
    p.tables = ValueTables(S, A, H);
    p.bonus.assign(H * S * A, 0.0);
    for (std::size_t hh = H; hh-- > 0;) {
      const auto next_values = p.tables.v_row(hh + 1);
      p.weights[hh] = grams_[hh].ridge_solve(regression_target(hh, next_values));
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
          const auto phi = env_->phi(s, a);
          const double bonus = beta_ * std::sqrt(grams_[hh].quadratic_form(phi));
          p.bonus[(hh * S + s) * A + a] = bonus;
          p.tables.Q(hh, s, a) = std::min(bonus + p.weights[hh].dot(phi), p.clip);
        }
        const auto row = p.tables.q_row(hh, s);
        p.tables.V(hh, s) = row[argmax_action(row)];
      }
    }
    return p;
  }

  /// min{beta sqrt(phi^T Lambda_h^{-1} phi) + w_h^T phi, H} for an arbitrary feature.
  double q_value(const LsviPlan& p, std::size_t h,
                 const Eigen::Ref<const Eigen::VectorXd>& phi) const {
    return std::min(p.beta * std::sqrt(grams_.at(h).quadratic_form(phi)) + p.weights.at(h).dot(phi),
                    p.clip);
  }

  static std::size_t act(const LsviPlan& p, std::size_t s, std::size_t h) {
    check_index(h, p.tables.horizon, "step");
    check_index(s, p.tables.num_states, "state");
    return argmax_action(p.tables.q_row(h, s));
  }

  void update(const Trajectory& t) {
    const std::size_t S = env_->num_states, A = env_->num_actions, H = env_->horizon;
    t.validate(S, A, H);
    for (std::size_t h = 0; h < H; ++h) {
      const std::size_t s = t.states[h], a = t.actions[h], n = t.states[h + 1];
      grams_[h].rank1_update(env_->phi(s, a));
      ++counts_[h][(s * A + a) * S + n];
      replay_[h].push_back({s, a, n});
    }
    ++episodes_;
  }

 private:
  const LinearMdpEnv* env_;
  double beta_;
  double lambda_;
  std::size_t episodes_ = 0;
  std::vector<GramState> grams_;
  std::vector<std::vector<std::size_t>> counts_;  // (s, a, s') per step
  std::vector<std::vector<Step>> replay_;
  std::vector<double> rewards_;
};

}  // namespace linrl
