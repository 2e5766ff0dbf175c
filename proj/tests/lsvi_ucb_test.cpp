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

TEST(LsviBetaTest, FrozenValue) {
  // 468 sqrt(ln 12000), evaluated at 40 digits.
  EXPECT_NEAR(lsvi_beta(2, 3, 300, 0.1), 1434.30066104947137, 1e-9);
  EXPECT_EQ(lsvi_beta(2, 3, 300, 0.1, 0.0), 0.0);
  EXPECT_NEAR(lsvi_beta(2, 3, 300, 0.1, 0.5), 0.5 * 1434.30066104947137, 1e-9);
}

TEST(LsviBetaTest, Monotone) {
  const double base = lsvi_beta(2, 3, 300, 0.1);
  EXPECT_GT(lsvi_beta(3, 3, 300, 0.1), base);
  EXPECT_GT(lsvi_beta(2, 4, 300, 0.1), base);
  EXPECT_GT(lsvi_beta(2, 3, 301, 0.1), base);
  EXPECT_GT(lsvi_beta(2, 3, 300, 0.05), base);
}

TEST(LsviBetaTest, RejectsBadDelta) {
  EXPECT_THROW(lsvi_beta(2, 3, 300, 0.0), ValidationError);
  EXPECT_THROW(lsvi_beta(2, 3, 300, 1.0), ValidationError);
  EXPECT_THROW(lsvi_beta(2, 3, 300, 0.1, -1.0), ValidationError);
}

TEST(LsviBetaTest, ExpectedRegretDelta) {
  EXPECT_DOUBLE_EQ(expected_regret_delta(10, 3), 1.0 / (2.0 * 10 * 11 * 27));
}

TEST(LsviPlanTest, EmptyRegressionGivesClippedBonus) {
  const LinearMdpEnv env = make_random_linear_mdp(3, 4, 2, 3, 1);
  const double beta = lsvi_beta(3, 3, 3000, 0.01);
  LsviAgent agent(env, beta);
  const LsviPlan plan = agent.plan();
  for (std::size_t h = 0; h < 3; ++h) {
    EXPECT_EQ(plan.weights[h], Eigen::VectorXd::Zero(3));
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t a = 0; a < 2; ++a) EXPECT_EQ(plan.tables.Q(h, s, a), 3.0);
  }
  LsviAgent small(env, 0.5);
  const LsviPlan p2 = small.plan();
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t a = 0; a < 2; ++a)
      EXPECT_NEAR(p2.tables.Q(0, s, a), std::min(0.5 * env.phi(s, a).norm(), 3.0), 1e-15);
}

TEST(LsviActTest, TieBreakAndArgmax) {
  LsviPlan p;
  p.tables = ValueTables(1, 2, 1);
  EXPECT_EQ(LsviAgent::act(p, 0, 0), 0u);
  p.tables.Q(0, 0, 0) = 1.0;
  p.tables.Q(0, 0, 1) = 2.0;
  EXPECT_EQ(LsviAgent::act(p, 0, 0), 1u);
  EXPECT_THROW(LsviAgent::act(p, 1, 0), IndexError);
}

// Runs `episodes` greedy episodes, checking the plan against the naive
// replay recomputation before each one.
TEST(LsviPlanTest, MatchesNaiveReplayReference) {
  const LinearMdpEnv env = make_random_linear_mdp(3, 4, 2, 3, 5);
  const TabularMdp tab = env.to_tabular();
  LsviAgent agent(env, 0.3);
  for (std::size_t k = 1; k <= 60; ++k) {
    const LsviPlan plan = agent.plan();
    const auto ref = testing::naive_lsvi_plan(agent);
    for (std::size_t h = 0; h < 3; ++h)
      for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t a = 0; a < 2; ++a) ASSERT_NEAR(plan.tables.Q(h, s, a), ref.q[h][s * 2 + a], 1e-10);
    Rng rng(9, k);
    agent.update(rollout(tab, greedy_policy(plan.tables), rng));
  }
  EXPECT_EQ(agent.episodes(), 60u);
  EXPECT_EQ(agent.gram(0).count(), 60u);
  EXPECT_EQ(agent.replay(2).size(), 60u);
}

TEST(LsviPlanTest, QValueMatchesTablesAndStaysClipped) {
  const LinearMdpEnv env = make_random_linear_mdp(2, 3, 3, 3, 6);
  const TabularMdp tab = env.to_tabular();
  LsviAgent agent(env, 2.0);
  for (std::size_t k = 1; k <= 40; ++k) {
    const LsviPlan plan = agent.plan();
    for (std::size_t h = 0; h < 3; ++h)
      for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t a = 0; a < 3; ++a) {
          ASSERT_LE(plan.tables.Q(h, s, a), 3.0);
          ASSERT_NEAR(agent.q_value(plan, h, env.phi(s, a)), plan.tables.Q(h, s, a), 1e-14);
        }
    Rng rng(1, k);
    agent.update(rollout(tab, greedy_policy(plan.tables), rng));
  }
}

TEST(LsviPlanTest, TargetsTrackTheCurrentNextStepValues) {
  const LinearMdpEnv env = make_random_linear_mdp(3, 4, 2, 3, 8);
  const TabularMdp tab = env.to_tabular();
  LsviAgent agent(env, 0.2);
  LsviPlan previous = agent.plan();
  std::size_t changed = 0;
  for (std::size_t k = 1; k <= 30; ++k) {
    Rng rng(4, k);
    agent.update(rollout(tab, greedy_policy(previous.tables), rng));
    const LsviPlan plan = agent.plan();
    for (std::size_t h = 0; h + 1 < 3; ++h) {
      const Eigen::VectorXd b = agent.regression_target(h, plan.tables.v_row(h + 1));
      EXPECT_LE((agent.gram(h).inverse() * b - plan.weights[h]).cwiseAbs().maxCoeff(), 1e-12);
      const auto now = plan.tables.v_row(h + 1), before = previous.tables.v_row(h + 1);
      if (!std::equal(now.begin(), now.end(), before.begin())) {
        EXPECT_NE(b, agent.regression_target(h, before));
        ++changed;
      }
    }
    previous = plan;
  }
  EXPECT_GT(changed, 0u);
}

TEST(LsviPlanTest, ScalarRidgeShrinkageOnOneHotEmbed) {
  const TabularMdp tab = make_random_tabular(2, 2, 2, 3);
  const LinearMdpEnv env = tabular_one_hot_embed(tab);
  LsviAgent agent(env, 0.0, 1.0);
  const double r = tab.reward(1, 0, 1);
  for (std::size_t n = 1; n <= 50; ++n) {
    Trajectory t;
    t.states = {1, 0, 1};
    t.actions = {0, 1};
    agent.update(t);
    const LsviPlan plan = agent.plan();
    const double expected = static_cast<double>(n) / (n + 1.0) * r;
    EXPECT_NEAR(plan.weights[1][1], expected, 1e-12);
    EXPECT_NEAR(plan.tables.Q(1, 0, 1), expected, 1e-12);
  }
}

TEST(LsviUpdateTest, RejectsMalformedTrajectories) {
  const LinearMdpEnv env = make_random_linear_mdp(2, 3, 2, 3, 1);
  LsviAgent agent(env, 1.0);
  Trajectory t;
  t.states = {0, 1};
  t.actions = {0};
  EXPECT_THROW(agent.update(t), ValidationError);
  t.states = {0, 1, 2, 3};
  t.actions = {0, 0, 0};
  EXPECT_THROW(agent.update(t), IndexError);
}

TEST(LsviRunTest, OptimismHoldsWithTheoreticalBeta) {
  ExperimentConfig cfg;
  cfg.environment.type = "random_linear_mdp";
  cfg.environment.d = 3;
  cfg.environment.S = 4;
  cfg.environment.A = 3;
  cfg.environment.H = 3;
  cfg.environment.seed = 2;
  cfg.algorithm = Algorithm::kLsviUcb;
  cfg.episodes = 300;
  cfg.seeds = {0, 1};
  cfg.diagnostics.peeling = false;
  for (const auto& t : run_experiment(cfg)) EXPECT_EQ(t.diagnostics.optimism_violations, 0u);
}

TEST(LsviRunTest, ConvergesToTheHardInstanceOptimalAction) {
  ExperimentConfig cfg = testing::negative_sign_hard_config(Algorithm::kLsviUcb);
  cfg.sweep_beta_scales = {0.01, 0.001, 0.0003};
  const SweepResult sweep = run_sweep(cfg);
  const HardInstance inst = make_hard_instance(testing::negative_sign_hard_spec());
  ASSERT_EQ(inst.optimal_action(0), 1u);
  for (const auto& t : sweep.tuned_cell().traces) {
    const auto& last = t.episodes.back();
    EXPECT_EQ(last.states[0], 0u);
    EXPECT_EQ(last.actions[0], inst.optimal_action(0)) << "seed " << t.seed;
  }
}

}  // namespace
}  // namespace linrl
