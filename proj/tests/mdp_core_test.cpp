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

using testing::small_hard_spec;

double row_sum(const TabularMdp& m, std::size_t h, std::size_t s, std::size_t a) {
  double t = 0.0;
  for (double p : m.row(h, s, a)) t += p;
  return t;
}

TEST(HardInstanceTest, EscapeProbabilityFollowsSignedInnerProduct) {
  const HardInstance inst = make_hard_instance(small_hard_spec());
  ASSERT_DOUBLE_EQ(inst.spec.escape_probability(), 1.0 / 3.0);
  ASSERT_EQ(inst.mu[0], (std::vector<double>{0.05, -0.05}));
  const std::size_t a = hard_action_index({1, -1});
  const std::size_t s1 = inst.chain_state(0), s2 = inst.chain_state(1);
  const double escape = 1.0 / 3.0 + 0.1;
  EXPECT_NEAR(inst.linear.transition_prob(0, s1, a, inst.goal()), escape, 1e-12);
  EXPECT_NEAR(inst.mixture.transition_prob(0, s1, a, inst.goal()), escape, 1e-12);
  EXPECT_NEAR(inst.tabular.prob(0, s1, a, inst.goal()), escape, 1e-12);
  EXPECT_NEAR(inst.linear.transition_prob(0, s1, a, s2), 1.0 - escape, 1e-12);
  EXPECT_NEAR(inst.mixture.transition_prob(0, s1, a, s2), 1.0 - escape, 1e-12);
  EXPECT_NEAR(escape, 0.43333, 1e-5);
  EXPECT_NEAR(1.0 - escape, 0.56667, 1e-5);
}

TEST(HardInstanceTest, AbsorbingStatesStay) {
  const HardInstance inst = make_hard_instance(small_hard_spec());
  for (std::size_t h = 0; h < 3; ++h)
    for (std::size_t a = 0; a < inst.tabular.num_actions; ++a) {
      EXPECT_DOUBLE_EQ(inst.linear.transition_prob(h, inst.dead_end(), a, inst.dead_end()), 1.0);
      EXPECT_DOUBLE_EQ(inst.mixture.transition_prob(h, inst.goal(), a, inst.goal()), 1.0);
      EXPECT_DOUBLE_EQ(inst.tabular.reward(h, inst.goal(), a), 1.0);
      EXPECT_DOUBLE_EQ(inst.tabular.reward(h, inst.chain_state(0), a), 0.0);
    }
}

TEST(HardInstanceTest, LinearViewsReproduceTheKernel) {
  for (std::size_t d : {2u, 3u, 4u})
    for (std::size_t H : {3u, 4u, 5u}) {
      HardInstanceSpec spec;
      spec.d = d;
      spec.horizon = H;
      spec.gap = 0.02;
      if (3.0 * (d - 1) * spec.gap > 1.0 / H) continue;
      const HardInstance inst = make_hard_instance(spec);
      EXPECT_LE(max_kernel_deviation(inst.linear.to_tabular(), inst.tabular), 1e-12);
      EXPECT_LE(max_kernel_deviation(inst.mixture.to_tabular(), inst.tabular), 1e-12);
      EXPECT_EQ(inst.linear.dim, H * d + 2);
      EXPECT_EQ(inst.mixture.dim, d);
      EXPECT_NEAR(inst.mixture.c_theta, std::sqrt(d * (1.0 + (d - 1) * 0.02 * 0.02)), 1e-12);
      for (std::size_t h = 0; h < H; ++h) EXPECT_LE(inst.mixture.theta(h).norm(), inst.mixture.c_theta + 1e-12);
    }
}

TEST(HardInstanceTest, GapAndOptimalAction) {
  const HardInstance inst = make_hard_instance(small_hard_spec());
  const ExactSolution sol = solve_optimal(inst.tabular);
  EXPECT_NEAR(sol.gap_min, 0.1, 1e-12);
  EXPECT_EQ(sol.policy(0, inst.chain_state(0)), hard_action_index({1, -1}));
  EXPECT_EQ(inst.optimal_action(0), hard_action_index({1, -1}));
  for (std::size_t s = 0; s < inst.tabular.num_states; ++s)
    for (std::size_t a = 0; a < inst.tabular.num_actions; ++a) EXPECT_EQ(sol.gap(2, s, a), 0.0);
}

TEST(HardInstanceTest, InfeasibleSpecsAreRejected) {
  HardInstanceSpec spec = small_hard_spec(0.1);  // 3 (d-1) Delta = 0.6 > 1/3
  EXPECT_THROW(make_hard_instance(spec), ValidationError);
  spec.lower_bound_conditions = false;
  EXPECT_NO_THROW(make_hard_instance(spec));
  spec = small_hard_spec();
  spec.horizon = 2;
  EXPECT_THROW(make_hard_instance(spec), ValidationError);
  spec = small_hard_spec();
  spec.escape = 0.5;
  EXPECT_THROW(make_hard_instance(spec), ValidationError);
  spec = small_hard_spec();
  spec.signs = {{1, 1}};
  EXPECT_THROW(make_hard_instance(spec), ValidationError);
  spec = small_hard_spec();
  spec.gap = 0.0;
  EXPECT_THROW(make_hard_instance(spec), ValidationError);
}

TEST(HardInstanceTest, MixtureValueFeaturesStayInUnitBall) {
  const HardInstance inst = make_hard_instance(small_hard_spec());
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(inst.mixture.num_states);
    for (auto& x : v) x = rng.uniform();
    for (std::size_t s = 0; s < inst.mixture.num_states; ++s)
      for (std::size_t a = 0; a < inst.mixture.num_actions; ++a)
        EXPECT_LE(inst.mixture.value_features(v, s, a).norm(), 1.0 + 1e-12);
  }
}

TEST(HardInstanceTest, ActionEncoding) {
  EXPECT_EQ(hard_action_vector(3, 0), (std::vector<int>{1, 1}));
  EXPECT_EQ(hard_action_vector(3, 2), (std::vector<int>{1, -1}));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(hard_action_index(hard_action_vector(4, i)), i);
}

TEST(TransitionProbTest, OutOfRangeIndicesThrow) {
  const HardInstance inst = make_hard_instance(small_hard_spec());
  EXPECT_THROW(inst.linear.transition_prob(3, 0, 0, 0), IndexError);
  EXPECT_THROW(inst.linear.transition_prob(0, 5, 0, 0), IndexError);
  EXPECT_THROW(inst.mixture.transition_prob(0, 0, 4, 0), IndexError);
  EXPECT_THROW(inst.mixture.transition_prob(0, 0, 0, 5), IndexError);
}

TEST(TransitionProbTest, TinyNegativesClampLargeOnesThrow) {
  EXPECT_EQ(clamp_probability(-5e-13), 0.0);
  EXPECT_EQ(clamp_probability(1.0 + 5e-13), 1.0);
  EXPECT_THROW(clamp_probability(-1e-9), ValidationError);
  EXPECT_THROW(clamp_probability(NAN), ValidationError);
}

TEST(RandomLinearMdpTest, RowsAreDistributions) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LinearMdpEnv env = make_random_linear_mdp(1 + seed % 4, 3, 2, 3, seed);
    for (std::size_t h = 0; h < env.horizon; ++h)
      for (std::size_t s = 0; s < env.num_states; ++s)
        for (std::size_t a = 0; a < env.num_actions; ++a) {
          double total = 0.0;
          for (std::size_t n = 0; n < env.num_states; ++n) {
            const double p = env.raw_transition(h, s, a, n);
            EXPECT_GE(p, -1e-12);
            total += p;
          }
          EXPECT_NEAR(total, 1.0, 1e-12);
          const double r = env.reward(h, s, a);
          EXPECT_GE(r, 0.0);
          EXPECT_LE(r, 1.0);
        }
    EXPECT_TRUE(env.normalization().conforming);
  }
}

TEST(RandomLinearMdpTest, OneDimensionalSharesOneKernel) {
  const LinearMdpEnv env = make_random_linear_mdp(1, 4, 3, 2, 11);
  for (std::size_t h = 0; h < 2; ++h)
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t a = 0; a < 3; ++a) {
        EXPECT_EQ(env.reward(h, s, a), env.reward(h, 0, 0));
        for (std::size_t n = 0; n < 4; ++n)
          EXPECT_EQ(env.transition_prob(h, s, a, n), env.transition_prob(h, 0, 0, n));
      }
}

TEST(RandomLinearMdpTest, SeedDeterminesEnvironment) {
  EXPECT_EQ(to_json(make_random_linear_mdp(3, 4, 2, 3, 7)).dump(),
            to_json(make_random_linear_mdp(3, 4, 2, 3, 7)).dump());
  EXPECT_NE(to_json(make_random_linear_mdp(3, 4, 2, 3, 7)).dump(),
            to_json(make_random_linear_mdp(3, 4, 2, 3, 8)).dump());
}

TEST(RandomLinearMixtureTest, RowsAndValueFeatureBound) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t d = 1 + seed % 4;
    const LinearMixtureEnv env = make_random_linear_mixture(d, 3, 2, 3, seed);
    EXPECT_NEAR(env.c_theta, std::sqrt(static_cast<double>(d)), 1e-15);
    for (std::size_t h = 0; h < env.horizon; ++h)
      for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t a = 0; a < 2; ++a) {
          double total = 0.0;
          for (std::size_t n = 0; n < 3; ++n) total += env.raw_transition(h, s, a, n);
          EXPECT_NEAR(total, 1.0, 1e-12);
        }
    const std::vector<double> ones(3, 1.0);
    Rng rng(seed);
    for (std::size_t s = 0; s < 3; ++s)
      for (std::size_t a = 0; a < 2; ++a) {
        const Vector f = env.value_features(ones, s, a);
        EXPECT_NEAR(f.norm(), 1.0, 1e-12);
        for (Eigen::Index j = 0; j < f.size(); ++j) EXPECT_NEAR(f[j], 1.0 / std::sqrt(double(d)), 1e-12);
      }
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> v(3);
      for (auto& x : v) x = rng.uniform();
      const double top = *std::max_element(v.begin(), v.end());
      for (auto& x : v) x /= top;
      for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t a = 0; a < 2; ++a) EXPECT_LE(env.value_features(v, s, a).norm(), 1.0 + 1e-12);
    }
  }
}

TEST(RandomLinearMixtureTest, OneDimensionalIsTheBaseKernel) {
  const LinearMixtureEnv env = make_random_linear_mixture(1, 3, 2, 2, 5);
  for (std::size_t h = 0; h < 2; ++h) EXPECT_DOUBLE_EQ(env.theta(h)[0], 1.0);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t n = 0; n < 3; ++n)
        EXPECT_DOUBLE_EQ(env.phi(s, a, n)[0], env.transition_prob(0, s, a, n));
}

TEST(RandomLinearMixtureTest, SeedDeterminesEnvironment) {
  EXPECT_EQ(to_json(make_random_linear_mixture(2, 3, 2, 3, 7)).dump(),
            to_json(make_random_linear_mixture(2, 3, 2, 3, 7)).dump());
}

TEST(ValueFeaturesTest, ZeroAndIndicatorValues) {
  const LinearMixtureEnv env = make_random_linear_mixture(3, 4, 2, 2, 1);
  const std::vector<double> zero(4, 0.0);
  EXPECT_EQ(env.value_features(zero, 2, 1).norm(), 0.0);
  std::vector<double> ind(4, 0.0);
  ind[3] = 1.0;
  EXPECT_LE((env.value_features(ind, 2, 1) - env.phi(2, 1, 3)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(env.value_features(std::vector<double>(3, 0.0), 0, 0), ValidationError);
  EXPECT_THROW(env.value_features(std::vector<double>{0, NAN, 0, 0}, 0, 0), ValidationError);
}

TEST(OneHotEmbedTest, IndicatorFeaturesAndExactKernel) {
  const TabularMdp tab = make_random_tabular(2, 2, 3, 4);
  const LinearMdpEnv env = tabular_one_hot_embed(tab);
  ASSERT_EQ(env.dim, 4u);
  Vector e2 = Vector::Zero(4);
  e2[1] = 1.0;
  EXPECT_EQ(Vector(env.phi(0, 1)), e2);
  for (std::size_t h = 0; h < 3; ++h)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t a = 0; a < 2; ++a) {
        EXPECT_EQ(env.reward(h, s, a), tab.reward(h, s, a));
        for (std::size_t n = 0; n < 2; ++n) EXPECT_EQ(env.transition_prob(h, s, a, n), tab.prob(h, s, a, n));
      }
}

TEST(OneHotEmbedTest, NormalizationReportOnTwoByTwo) {
  // sum_s' theta_h(s') is the all-ones vector of length S*A, whose norm is
  // exactly sqrt(d); the embed therefore conforms.
  const LinearMdpEnv env = tabular_one_hot_embed(make_random_tabular(2, 2, 2, 9));
  const NormalizationReport rep = env.normalization();
  EXPECT_NEAR(rep.max_measure_mass_norm, 2.0, 1e-12);
  EXPECT_NEAR(rep.max_feature_norm, 1.0, 1e-15);
  EXPECT_TRUE(rep.conforming);
}

TEST(OneHotEmbedTest, FlagTriggersWhenMeasureMassIsTooLarge) {
  LinearMdpEnv env(1, 1, 1, 1);
  env.features = {0.5};
  env.measures = {2.0};
  env.reward_params = {1.0};
  env.initial_distribution = {1.0};
  env.validate();
  EXPECT_FALSE(env.normalization().conforming);
}

TEST(TabularTest, ValidationCatchesBadRows) {
  TabularMdp m = make_random_tabular(2, 2, 2, 1);
  m.prob(1, 0, 1, 0) += 0.1;
  EXPECT_THROW(m.validate(), ValidationError);
  m = make_random_tabular(2, 2, 2, 1);
  m.reward(0, 0, 0) = 1.5;
  EXPECT_THROW(m.validate(), ValidationError);
  EXPECT_THROW(m.prob(2, 0, 0, 0), IndexError);
}

TEST(SerializationTest, RoundTripIsBitExact) {
  const HardInstance inst = make_hard_instance(small_hard_spec());
  const LinearMdpEnv lin = make_random_linear_mdp(3, 4, 2, 3, 21);
  const LinearMixtureEnv mix = make_random_linear_mixture(2, 3, 3, 2, 22);
  const TabularMdp tab = make_random_tabular(3, 2, 3, 23);

  const auto lin2 = linear_mdp_from_json(nlohmann::json::parse(to_json(lin).dump()));
  EXPECT_EQ(lin2.features, lin.features);
  EXPECT_EQ(lin2.measures, lin.measures);
  EXPECT_EQ(lin2.reward_params, lin.reward_params);
  EXPECT_EQ(lin2.initial_distribution, lin.initial_distribution);
  EXPECT_EQ(lin2.seed, lin.seed);

  const auto mix2 = linear_mixture_from_json(nlohmann::json::parse(to_json(mix).dump()));
  EXPECT_EQ(mix2.triplet_features, mix.triplet_features);
  EXPECT_EQ(mix2.theta_star, mix.theta_star);
  EXPECT_EQ(mix2.rewards, mix.rewards);
  EXPECT_EQ(mix2.c_theta, mix.c_theta);

  const auto tab2 = tabular_from_json(nlohmann::json::parse(to_json(tab).dump()));
  EXPECT_EQ(tab2.transitions, tab.transitions);
  EXPECT_EQ(tab2.rewards, tab.rewards);

  const auto hard2 = linear_mixture_from_json(nlohmann::json::parse(to_json(inst.mixture).dump()));
  EXPECT_EQ(to_json(hard2).dump(), to_json(inst.mixture).dump());
  const auto hard3 = linear_mdp_from_json(nlohmann::json::parse(to_json(inst.linear).dump()));
  EXPECT_EQ(to_json(hard3).dump(), to_json(inst.linear).dump());
}

TEST(SerializationTest, RejectsWrongKindAndShape) {
  auto j = to_json(make_random_tabular(2, 2, 2, 1));
  EXPECT_THROW(linear_mdp_from_json(j), ValidationError);
  j["rewards"].erase(0);
  EXPECT_THROW(tabular_from_json(j), ValidationError);
  j = to_json(make_random_tabular(2, 2, 2, 1));
  j["schema_version"] = 2;
  EXPECT_THROW(tabular_from_json(j), ValidationError);
}

TEST(RngTest, StreamsAreReproducibleAndDistinct) {
  Rng a(5, 1), b(5, 1), c(5, 2);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    (void)c;
  }
  Rng d(5, 1), e(5, 2);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += d() == e();
  EXPECT_EQ(same, 0);
  Rng f(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = f.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  const auto w = f.simplex(5);
  double total = 0.0;
  for (double x : w) total += x;
  EXPECT_NEAR(total, 1.0, 1e-15);
}

}  // namespace
}  // namespace linrl
