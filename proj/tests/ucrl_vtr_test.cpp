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


#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "linrl.hpp"
#include "test_support.hpp"

namespace linrl {
namespace {

std::vector<Eigen::VectorXd> planted(const LinearMixtureEnv& env) {
  std::vector<Eigen::VectorXd> out;
  for (std::size_t h = 0; h < env.horizon; ++h) out.emplace_back(env.theta(h));
  return out;
}

TEST(VtrBetaTest, FrozenValue) {
  // 24 sqrt(2 ln 4 ln^2 120), evaluated at 40 digits.
  EXPECT_NEAR(vtr_beta(1, 2, 3, 2.0, 0.1), 191.320719663964563, 1e-10);
  EXPECT_EQ(vtr_beta(1, 2, 3, 2.0, 0.1, 0.0), 0.0);
}

TEST(VtrBetaTest, NonDecreasingInEpisode) {
  double prev = 0.0;
  for (std::size_t k = 1; k <= 1000; ++k) {
    const double b = vtr_beta(k, 3, 4, 1.5, 0.01);
    EXPECT_GE(b, prev);
    prev = b;
  }
}

TEST(VtrBetaTest, RejectsBadArguments) {
  EXPECT_THROW(vtr_beta(1, 2, 3, 2.0, 0.0), ValidationError);
  EXPECT_THROW(vtr_beta(1, 2, 3, 2.0, 1.5), ValidationError);
  EXPECT_THROW(vtr_beta(0, 2, 3, 2.0, 0.1), ValidationError);
}

TEST(VtrPlanTest, FirstEpisodeUsesZeroEstimate) {
  const LinearMixtureEnv env = make_random_linear_mixture(3, 4, 2, 3, 1);
  VtrAgent agent(env, VtrParams{});
  EXPECT_DOUBLE_EQ(agent.lambda(), 27.0);
  const VtrPlan plan = agent.plan();
  EXPECT_EQ(plan.episode, 1u);
  EXPECT_DOUBLE_EQ(plan.beta, vtr_beta(1, 3, 3, env.c_theta, 0.01));
  for (std::size_t h = 0; h < 3; ++h) {
    EXPECT_EQ(plan.theta[h], Eigen::VectorXd::Zero(3));
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t a = 0; a < 2; ++a) {
        const Vector phi = env.value_features(plan.tables.v_row(h + 1), s, a);
        const double expected = env.reward(s, a) + plan.beta * std::sqrt(phi.squaredNorm() / 27.0);
        EXPECT_NEAR(plan.tables.Q(h, s, a), expected, 1e-12);
      }
  }
}

TEST(VtrPlanTest, PlantedParameterReproducesOptimalValues) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const LinearMixtureEnv env = make_random_linear_mixture(3, 4, 3, 4, seed);
    const ExactSolution sol = solve_optimal(env);
    VtrAgent agent(env, VtrParams{});
    const VtrPlan plan = agent.plan_with(planted(env), 0.0);
    for (std::size_t h = 0; h < 4; ++h)
      for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(plan.tables.Q(h, s, a), sol.Q(h, s, a), 1e-10);
  }
  const HardInstance inst = make_hard_instance(testing::small_hard_spec());
  const ExactSolution sol = solve_optimal(inst.tabular);
  VtrAgent agent(inst.mixture, VtrParams{});
  const VtrPlan plan = agent.plan_with(planted(inst.mixture), 0.0);
  for (std::size_t h = 0; h < 3; ++h)
    for (std::size_t s = 0; s < inst.tabular.num_states; ++s)
      for (std::size_t a = 0; a < inst.tabular.num_actions; ++a)
        EXPECT_NEAR(plan.tables.Q(h, s, a), sol.Q(h, s, a), 1e-10);
}

TEST(VtrPlanTest, ClipFlagBoundsValues) {
  const LinearMixtureEnv env = make_random_linear_mixture(2, 3, 2, 4, 3);
  VtrParams clipped;
  VtrAgent a(env, clipped);
  const VtrPlan p = a.plan();
  for (std::size_t h = 0; h < 4; ++h)
    for (std::size_t s = 0; s < 3; ++s) {
      EXPECT_GE(p.tables.V(h, s), 0.0);
      EXPECT_LE(p.tables.V(h, s), 4.0 - h);
    }
  VtrParams raw;
  raw.clip = false;
  VtrAgent b(env, raw);
  const VtrPlan q = b.plan();
  bool exceeded = false;
  for (std::size_t h = 0; h < 4; ++h)
    for (std::size_t s = 0; s < 3; ++s) exceeded = exceeded || q.tables.V(h, s) > 4.0 - h;
  EXPECT_TRUE(exceeded);
}

TEST(VtrActTest, FirstMaximalIndex) {
  VtrPlan p;
  p.tables = ValueTables(1, 3, 1);
  EXPECT_EQ(VtrAgent::act(p, 0, 0), 0u);
  p.tables.Q(0, 0, 0) = 0.2;
  p.tables.Q(0, 0, 1) = 0.9;
  p.tables.Q(0, 0, 2) = 0.9;
  EXPECT_EQ(VtrAgent::act(p, 0, 0), 1u);
}

TEST(VtrUpdateTest, ZeroValueLeavesStateUnchanged) {
  const LinearMixtureEnv env = make_random_linear_mixture(2, 3, 2, 1, 4);
  VtrAgent agent(env, VtrParams{});
  const VtrPlan plan = agent.plan();
  Trajectory t;
  t.states = {0, 2};
  t.actions = {1};
  const Eigen::MatrixXd before = agent.gram(0).matrix();
  agent.update(t, plan);
  EXPECT_EQ(agent.gram(0).matrix(), before);
  EXPECT_EQ(agent.target(0), Eigen::VectorXd::Zero(2));
  EXPECT_EQ(agent.gram(0).count(), 1u);
  EXPECT_EQ(agent.episodes(), 1u);
}

TEST(VtrUpdateTest, ScalarCase) {
  const LinearMixtureEnv env = make_random_linear_mixture(1, 2, 1, 2, 6);
  VtrAgent agent(env, VtrParams{});
  const double lambda = agent.lambda();
  EXPECT_DOUBLE_EQ(lambda, 4.0);
  const VtrPlan plan = agent.plan_with(planted(env), 0.0);
  Trajectory t;
  t.states = {0, 1, 0};
  t.actions = {0, 0};
  agent.update(t, plan);
  double phi = 0.0;
  for (std::size_t n = 0; n < 2; ++n) phi += env.phi(0, 0, n)[0] * plan.tables.V(1, n);
  const double v = plan.tables.V(1, 1);
  EXPECT_NEAR(agent.gram(0).matrix()(0, 0), lambda + phi * phi, 1e-14);
  EXPECT_NEAR(agent.target(0)[0], v * phi, 1e-14);
  EXPECT_NEAR(agent.estimates()[0][0], v * phi / (lambda + phi * phi), 1e-14);
}

TEST(VtrUpdateTest, StationaryStreamMatchesDenseRidge) {
  const LinearMixtureEnv env = make_random_linear_mixture(3, 4, 2, 2, 7);
  const TabularMdp tab = env.to_tabular();
  VtrAgent agent(env, VtrParams{});
  const VtrPlan fixed = agent.plan_with(planted(env), 0.0);
  Eigen::MatrixXd gram = agent.lambda() * Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3);
  Rng policy_rng(1);
  for (std::size_t k = 1; k <= 500; ++k) {
    Rng rng(2, k);
    const Trajectory t = rollout(tab, testing::random_policy(tab, policy_rng), rng);
    agent.update(t, fixed);
    const Vector phi = env.value_features(fixed.tables.v_row(1), t.states[0], t.actions[0]);
    gram += phi * phi.transpose();
    b += fixed.tables.V(1, t.states[1]) * phi;
  }
  const Eigen::VectorXd dense = gram.ldlt().solve(b);
  EXPECT_LE((agent.estimates()[0] - dense).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE((agent.estimates()[0] - agent.gram(0).matrix().ldlt().solve(agent.target(0))).cwiseAbs().maxCoeff(),
            1e-9);
}

TEST(VtrUpdateTest, RejectsMalformedTrajectories) {
  const LinearMixtureEnv env = make_random_linear_mixture(2, 3, 2, 2, 1);
  VtrAgent agent(env, VtrParams{});
  const VtrPlan plan = agent.plan();
  Trajectory t;
  t.states = {0, 1};
  t.actions = {0};
  EXPECT_THROW(agent.update(t, plan), ValidationError);
}

TEST(VtrRunTest, TheoreticalBetaKeepsConfidenceSetsAndOptimism) {
  ExperimentConfig cfg;
  cfg.environment.type = "hard_instance";
  cfg.environment.d = 3;
  cfg.environment.H = 3;
  cfg.environment.gap = 0.05;
  cfg.algorithm = Algorithm::kUcrlVtr;
  cfg.episodes = 300;
  cfg.seeds = {0, 1};
  const auto env = build_environment(cfg.environment);
  for (const auto& t : run_experiment(cfg)) {
    EXPECT_EQ(t.diagnostics.optimism_violations, 0u);
    EXPECT_EQ(t.diagnostics.confidence_violations, 0u);
    EXPECT_EQ(t.diagnostics.potential_violations, 0u);
    EXPECT_TRUE(t.diagnostics.ridge_optimal);
    EXPECT_LE(t.diagnostics.max_inverse_error, 1e-9);
  }
}

TEST(VtrRunTest, PotentialAndLineThreeConsistencyOnRandomMixture) {
  const LinearMixtureEnv env = make_random_linear_mixture(3, 4, 2, 3, 9);
  const TabularMdp tab = env.to_tabular();
  VtrAgent agent(env, VtrParams{});
  for (std::size_t k = 1; k <= 400; ++k) {
    const VtrPlan plan = agent.plan();
    for (std::size_t h = 0; h < 3; ++h) {
      const Eigen::VectorXd dense = agent.gram(h).matrix().ldlt().solve(agent.target(h));
      ASSERT_LE((plan.theta[h] - dense).cwiseAbs().maxCoeff(), 1e-9);
      ASSERT_GE(plan.tables.V(h, 0), 0.0);
      ASSERT_LE(plan.tables.V(h, 0), 3.0 - h);
    }
    Rng rng(3, k);
    agent.update(rollout(tab, greedy_policy(plan.tables), rng), plan);
  }
  for (std::size_t h = 0; h < 3; ++h) {
    const double lambda = agent.lambda();
    EXPECT_LE(agent.gram(h).potential(), 2.0 * 3 * std::log((lambda + 400.0 * 9.0) / lambda));
  }
}

TEST(VtrRunTest, ConvergesToTheHardInstanceOptimalAction) {
  ExperimentConfig cfg = testing::negative_sign_hard_config(Algorithm::kUcrlVtr);
  cfg.sweep_beta_scales = {0.1, 0.01, 0.003};
  const SweepResult sweep = run_sweep(cfg);
  const HardInstance inst = make_hard_instance(testing::negative_sign_hard_spec());
  for (const auto& t : sweep.tuned_cell().traces) {
    const auto& last = t.episodes.back();
    EXPECT_EQ(last.actions[0], inst.optimal_action(0)) << "seed " << t.seed;
  }
}

}  // namespace
}  // namespace linrl
