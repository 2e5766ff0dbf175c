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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linrl/common.hpp"
#include "linrl/tabular.hpp"

namespace linrl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

/// Norm diagnostics for the normalization that accompanies the linear MDP
/// assumption: ||phi|| <= 1, ||mu_h|| <= sqrt(d), ||sum_s' theta_h(s')|| <= sqrt(d).
struct NormalizationReport {
  double max_feature_norm = 0.0;
  double max_reward_param_norm = 0.0;
  double max_measure_mass_norm = 0.0;
  bool conforming = true;
};

// Linear MDP: P_h(s'|s,a) = <phi(s,a), theta_h(s')>, r_h(s,a) = <phi(s,a), mu_h>.
// Storage: features (s, a, j), measures (h, s', j), reward_params (h, j).
struct LinearMdpEnv {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::size_t horizon = 0;
  std::size_t dim = 0;
  std::vector<double> features;
  std::vector<double> measures;
  std::vector<double> reward_params;
  std::vector<double> initial_distribution;
  std::string construction;
  std::uint64_t seed = 0;

  LinearMdpEnv() = default;
  LinearMdpEnv(std::size_t S, std::size_t A, std::size_t H, std::size_t d)
      : num_states(S),
        num_actions(A),
        horizon(H),
        dim(d),
        features(S * A * d, 0.0),
        measures(H * S * d, 0.0),
        reward_params(H * d, 0.0),
        initial_distribution(S, 0.0) {}

  ConstVectorMap phi(std::size_t s, std::size_t a) const {
    return ConstVectorMap(features.data() + (s * num_actions + a) * dim,
                          static_cast<Eigen::Index>(dim));
  }
  double* phi_data(std::size_t s, std::size_t a) { return features.data() + (s * num_actions + a) * dim; }

  ConstVectorMap theta(std::size_t h, std::size_t next) const {
    return ConstVectorMap(measures.data() + (h * num_states + next) * dim,
                          static_cast<Eigen::Index>(dim));
  }
  double* theta_data(std::size_t h, std::size_t next) {
    return measures.data() + (h * num_states + next) * dim;
  }

  ConstVectorMap mu(std::size_t h) const {
    return ConstVectorMap(reward_params.data() + h * dim, static_cast<Eigen::Index>(dim));
  }
  double* mu_data(std::size_t h) { return reward_params.data() + h * dim; }

  double raw_transition(std::size_t h, std::size_t s, std::size_t a, std::size_t next) const {
    return phi(s, a).dot(theta(h, next));
  }

  /// Inner-product transition probability, clamped to [0, 1].
  double transition_prob(std::size_t h, std::size_t s, std::size_t a, std::size_t next) const {
    check_index(h, horizon, "step");
    check_index(s, num_states, "state");
    check_index(a, num_actions, "action");
    check_index(next, num_states, "next state");
    return clamp_probability(raw_transition(h, s, a, next));
  }

  double reward(std::size_t h, std::size_t s, std::size_t a) const {
    check_index(h, horizon, "step");
    check_index(s, num_states, "state");
    check_index(a, num_actions, "action");
    return phi(s, a).dot(mu(h));
  }

  NormalizationReport normalization() const {
    NormalizationReport rep;
    const double tol = 1e-12;
    for (std::size_t s = 0; s < num_states; ++s)
      for (std::size_t a = 0; a < num_actions; ++a)
        rep.max_feature_norm = std::max(rep.max_feature_norm, phi(s, a).norm());
    for (std::size_t h = 0; h < horizon; ++h) {
      rep.max_reward_param_norm = std::max(rep.max_reward_param_norm, mu(h).norm());
      Vector mass = Vector::Zero(static_cast<Eigen::Index>(dim));
      for (std::size_t next = 0; next < num_states; ++next) mass += theta(h, next);
      rep.max_measure_mass_norm = std::max(rep.max_measure_mass_norm, mass.norm());
    }
    const double root_d = std::sqrt(static_cast<double>(dim));
    rep.conforming = rep.max_feature_norm <= 1.0 + tol &&
                     rep.max_reward_param_norm <= root_d * (1.0 + tol) &&
                     rep.max_measure_mass_norm <= root_d * (1.0 + tol);
    return rep;
  }

  /// Checks the kernel and reward invariants. Norm conditions are reported
  /// through normalization(), not enforced here.
  void validate() const {
    require(num_states >= 1 && num_actions >= 1 && horizon >= 1 && dim >= 1,
            "linear MDP needs S, A, H, d >= 1");
    require(features.size() == num_states * num_actions * dim, "feature table has wrong size");
    require(measures.size() == horizon * num_states * dim, "measure table has wrong size");
    require(reward_params.size() == horizon * dim, "reward parameters have wrong size");
    require(initial_distribution.size() == num_states, "initial distribution has wrong size");
    for (double x : features) require(std::isfinite(x), "non-finite feature");
    for (double x : measures) require(std::isfinite(x), "non-finite measure");
    for (double x : reward_params) require(std::isfinite(x), "non-finite reward parameter");
    for (std::size_t h = 0; h < horizon; ++h) {
      for (std::size_t s = 0; s < num_states; ++s) {
        for (std::size_t a = 0; a < num_actions; ++a) {
          double total = 0.0;
          for (std::size_t next = 0; next < num_states; ++next) {
            const double p = raw_transition(h, s, a, next);
            require(p >= -kProbTol, "negative linear transition probability");
            total += p;
          }
          require(std::abs(total - 1.0) <= kProbTol, "linear transition row does not sum to one");
          const double r = phi(s, a).dot(mu(h));
          require(r >= -kProbTol && r <= 1.0 + kProbTol, "linear reward outside [0,1]");
        }
      }
    }
    double total = 0.0;
    for (double p : initial_distribution) total += p;
    require(std::abs(total - 1.0) <= kProbTol, "initial distribution does not sum to one");
  }

  TabularMdp to_tabular() const {
    TabularMdp tab(num_states, num_actions, horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
      for (std::size_t s = 0; s < num_states; ++s) {
        for (std::size_t a = 0; a < num_actions; ++a) {
          for (std::size_t next = 0; next < num_states; ++next)
            tab.prob(h, s, a, next) = clamp_probability(raw_transition(h, s, a, next));
          tab.reward(h, s, a) = std::clamp(phi(s, a).dot(mu(h)), 0.0, 1.0);
        }
      }
    }
    tab.initial_distribution = initial_distribution;
    return tab;
  }
};

// Linear mixture MDP: P_h(s'|s,a) = <phi(s'|s,a), theta*_h> with a known,
// deterministic, step-independent reward r(s,a).
// Storage: triplet_features (s, a, s', j), theta_star (h, j), rewards (s, a).
struct LinearMixtureEnv {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::size_t horizon = 0;
  std::size_t dim = 0;
  std::vector<double> triplet_features;
  std::vector<double> theta_star;
  std::vector<double> rewards;
  double c_theta = 1.0;
  std::vector<double> initial_distribution;
  std::string construction;
  std::uint64_t seed = 0;

  LinearMixtureEnv() = default;
  LinearMixtureEnv(std::size_t S, std::size_t A, std::size_t H, std::size_t d)
      : num_states(S),
        num_actions(A),
        horizon(H),
        dim(d),
        triplet_features(S * A * S * d, 0.0),
        theta_star(H * d, 0.0),
        rewards(S * A, 0.0),
        initial_distribution(S, 0.0) {}

  std::size_t triplet_offset(std::size_t s, std::size_t a, std::size_t next) const {
    return ((s * num_actions + a) * num_states + next) * dim;
  }

  ConstVectorMap phi(std::size_t s, std::size_t a, std::size_t next) const {
    return ConstVectorMap(triplet_features.data() + triplet_offset(s, a, next),
                          static_cast<Eigen::Index>(dim));
  }
  double* phi_data(std::size_t s, std::size_t a, std::size_t next) {
    return triplet_features.data() + triplet_offset(s, a, next);
  }

  ConstVectorMap theta(std::size_t h) const {
    return ConstVectorMap(theta_star.data() + h * dim, static_cast<Eigen::Index>(dim));
  }
  double* theta_data(std::size_t h) { return theta_star.data() + h * dim; }

  double& reward(std::size_t s, std::size_t a) { return rewards[s * num_actions + a]; }
  double reward(std::size_t s, std::size_t a) const { return rewards[s * num_actions + a]; }

  double raw_transition(std::size_t h, std::size_t s, std::size_t a, std::size_t next) const {
    return phi(s, a, next).dot(theta(h));
  }

  double transition_prob(std::size_t h, std::size_t s, std::size_t a, std::size_t next) const {
    check_index(h, horizon, "step");
    check_index(s, num_states, "state");
    check_index(a, num_actions, "action");
    check_index(next, num_states, "next state");
    return clamp_probability(raw_transition(h, s, a, next));
  }

  /// phi_V(s,a) = sum_s' phi(s'|s,a) V(s'), written into `out`.
  void value_features_into(std::span<const double> values, std::size_t s, std::size_t a,
                           Vector& out) const {
    out.setZero(static_cast<Eigen::Index>(dim));
    const double* base = triplet_features.data() + triplet_offset(s, a, 0);
    for (std::size_t next = 0; next < num_states; ++next) {
      const double v = values[next];
      if (v == 0.0) continue;
      out += v * ConstVectorMap(base + next * dim, static_cast<Eigen::Index>(dim));
    }
  }

  Vector value_features(std::span<const double> values, std::size_t s, std::size_t a) const {
    if (values.size() != num_states) {
      throw ValidationError("value vector has " + std::to_string(values.size()) +
                            " entries, expected " + std::to_string(num_states));
    }
    check_index(s, num_states, "state");
    check_index(a, num_actions, "action");
    for (double v : values) require(std::isfinite(v), "non-finite value in value_features");
    Vector out;
    value_features_into(values, s, a, out);
    return out;
  }

  void validate() const {
    require(num_states >= 1 && num_actions >= 1 && horizon >= 1 && dim >= 1,
            "mixture MDP needs S, A, H, d >= 1");
    require(triplet_features.size() == num_states * num_actions * num_states * dim,
            "triplet feature table has wrong size");
    require(theta_star.size() == horizon * dim, "theta* has wrong size");
    require(rewards.size() == num_states * num_actions, "reward table has wrong size");
    require(initial_distribution.size() == num_states, "initial distribution has wrong size");
    require(c_theta > 0.0, "C_theta must be positive");
    for (double x : triplet_features) require(std::isfinite(x), "non-finite triplet feature");
    for (std::size_t h = 0; h < horizon; ++h) {
      require(theta(h).norm() <= c_theta * (1.0 + 1e-12), "||theta*_h|| exceeds C_theta");
      for (std::size_t s = 0; s < num_states; ++s) {
        for (std::size_t a = 0; a < num_actions; ++a) {
          double total = 0.0;
          for (std::size_t next = 0; next < num_states; ++next) {
            const double p = raw_transition(h, s, a, next);
            require(p >= -kProbTol, "negative mixture transition probability");
            total += p;
          }
          require(std::abs(total - 1.0) <= kProbTol, "mixture transition row does not sum to one");
        }
      }
    }
    for (double r : rewards) require(r >= 0.0 && r <= 1.0, "mixture reward outside [0,1]");
    double total = 0.0;
    for (double p : initial_distribution) total += p;
    require(std::abs(total - 1.0) <= kProbTol, "initial distribution does not sum to one");
  }

  TabularMdp to_tabular() const {
    TabularMdp tab(num_states, num_actions, horizon);
    for (std::size_t h = 0; h < horizon; ++h)
      for (std::size_t s = 0; s < num_states; ++s)
        for (std::size_t a = 0; a < num_actions; ++a) {
          for (std::size_t next = 0; next < num_states; ++next)
            tab.prob(h, s, a, next) = clamp_probability(raw_transition(h, s, a, next));
          tab.reward(h, s, a) = reward(s, a);
        }
    tab.initial_distribution = initial_distribution;
    return tab;
  }
};

}  // namespace linrl
