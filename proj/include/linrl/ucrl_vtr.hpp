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
#include <optional>
#include <vector>

#include "linrl/common.hpp"
#include "linrl/dp_oracle.hpp"
#include "linrl/episode.hpp"
#include "linrl/gram.hpp"
#include "linrl/linear_env.hpp"

namespace linrl {

/// c * 4 C_theta H sqrt(d ln(1 + H k) ln^2((k+1)^2 H / delta)).
inline double vtr_beta(std::size_t k, std::size_t d, std::size_t H, double c_theta, double delta,
                       double scale = 1.0) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  require(k >= 1, "vtr_beta is defined for k >= 1");
  require(scale >= 0.0 && std::isfinite(scale), "beta scale must be non-negative");
  const double kk = static_cast<double>(k), hh = static_cast<double>(H);
  const double log_conf = std::log((kk + 1.0) * (kk + 1.0) * hh / delta);
  return scale * 4.0 * c_theta * hh *
         std::sqrt(static_cast<double>(d) * std::log(1.0 + hh * kk) * log_conf * log_conf);
}

struct VtrParams {
  std::optional<double> lambda;  // default H^2 d
  double beta_scale = 1.0;
  double delta = 0.01;
  bool clip = true;  // clip V_h^k to [0, H-h+1]
};

struct VtrPlan {
  std::size_t episode = 1;  // k
  double beta = 0.0;
  std::vector<Eigen::VectorXd> theta;  // theta_{k,h}
  ValueTables tables;
  std::vector<double> bonus;  // (h, s, a)

  double bonus_at(std::size_t h, std::size_t s, std::size_t a) const {
    return bonus[(h * tables.num_states + s) * tables.num_actions + a];
  }
};

// UCRL with value-targeted model estimation on a linear mixture MDP,
// time-inhomogeneous: one Gram matrix and target vector per step.
class VtrAgent {
 public:
  VtrAgent(const LinearMixtureEnv& env, const VtrParams& params) : env_(&env), params_(params) {
    const double d = static_cast<double>(env.dim), H = static_cast<double>(env.horizon);
    lambda_ = params.lambda.value_or(H * H * d);
    require(lambda_ > 0.0, "lambda must be positive");
    require(params.beta_scale >= 0.0, "beta scale must be non-negative");
    require(params.delta > 0.0 && params.delta < 1.0, "delta must lie in (0,1)");
    grams_.assign(env.horizon, GramState(env.dim, lambda_));
    targets_.assign(env.horizon, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(env.dim)));
  }

  const LinearMixtureEnv& env() const { return *env_; }
  const VtrParams& params() const { return params_; }
  double lambda() const { return lambda_; }
  std::size_t episodes() const { return episodes_; }
  const GramState& gram(std::size_t h) const { return grams_.at(h); }
  const Eigen::VectorXd& target(std::size_t h) const { return targets_.at(h); }

  /// beta_k for the upcoming episode k = episodes() + 1.
  double current_beta() const {
    return vtr_beta(episodes_ + 1, env_->dim, env_->horizon, env_->c_theta, params_.delta,
                    params_.beta_scale);
  }

  /// theta_{k,h} = Sigma_h^{-1} b_h.
  std::vector<Eigen::VectorXd> estimates() const {
    std::vector<Eigen::VectorXd> out(env_->horizon);
    for (std::size_t h = 0; h < env_->horizon; ++h) out[h] = grams_[h].ridge_solve(targets_[h]);
    return out;
  }

  VtrPlan plan() const { return plan_with(estimates(), current_beta()); }

  // Optimistic backward pass for given parameter estimates and bonus scale.
  VtrPlan plan_with(std::vector<Eigen::VectorXd> theta, double beta) const {
    const std::size_t S = env_->num_states, A = env_->num_actions, H = env_->horizon;
    require(theta.size() == H, "need one parameter estimate per step");
    VtrPlan p;
    p.episode = episodes_ + 1;
    p.beta = beta;
    p.theta = std::move(theta);
    p.tables = ValueTables(S, A, H);
    p.bonus.assign(H * S * A, 0.0);
    Eigen::VectorXd phi_v;
    for (std::size_t hh = H; hh-- > 0;) {
      const auto next_values = p.tables.v_row(hh + 1);
      const double ceiling = static_cast<double>(H - hh);
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
          env_->value_features_into(next_values, s, a, phi_v);
          const double bonus = beta * std::sqrt(grams_[hh].quadratic_form(phi_v));
          p.bonus[(hh * S + s) * A + a] = bonus;
          p.tables.Q(hh, s, a) = env_->reward(s, a) + phi_v.dot(p.theta[hh]) + bonus;
        }
        const auto row = p.tables.q_row(hh, s);
        double v = row[argmax_action(row)];
        if (params_.clip) v = std::clamp(v, 0.0, ceiling);
        p.tables.V(hh, s) = v;
      }
    }
    return p;
  }

  static std::size_t act(const VtrPlan& p, std::size_t s, std::size_t h) {
    check_index(h, p.tables.horizon, "step");
    check_index(s, p.tables.num_states, "state");
    return argmax_action(p.tables.q_row(h, s));
  }

  /// Adds phi_{V_{h+1}^k}(s_h, a_h) to Sigma_h and V_{h+1}^k(s_{h+1}) phi to b_h.
  void update(const Trajectory& t, const VtrPlan& p) {
    const std::size_t S = env_->num_states, A = env_->num_actions, H = env_->horizon;
    t.validate(S, A, H);
    require(p.tables.num_states == S && p.tables.horizon == H, "plan does not match environment");
    Eigen::VectorXd phi_v;
    for (std::size_t h = 0; h < H; ++h) {
      const auto next_values = p.tables.v_row(h + 1);
      env_->value_features_into(next_values, t.states[h], t.actions[h], phi_v);
      grams_[h].rank1_update(phi_v);
      targets_[h] += next_values[t.states[h + 1]] * phi_v;
    }
    ++episodes_;
  }

  /// (theta - theta_{k,h})^T Sigma_h (theta - theta_{k,h}).
  double confidence_radius_sq(std::size_t h, const Eigen::Ref<const Eigen::VectorXd>& theta,
                              const Eigen::Ref<const Eigen::VectorXd>& estimate) const {
    const Eigen::VectorXd diff = theta - estimate;
    return diff.dot(grams_.at(h).matrix() * diff);
  }

 private:
  const LinearMixtureEnv* env_;
  VtrParams params_;
  double lambda_ = 1.0;
  std::size_t episodes_ = 0;
  std::vector<GramState> grams_;
  std::vector<Eigen::VectorXd> targets_;
};

}  // namespace linrl
