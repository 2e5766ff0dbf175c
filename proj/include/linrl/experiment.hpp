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
#include <cstdint>
#include <exception>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "linrl/common.hpp"
#include "linrl/config.hpp"
#include "linrl/dp_oracle.hpp"
#include "linrl/episode.hpp"
#include "linrl/gram.hpp"
#include "linrl/lsvi_ucb.hpp"
#include "linrl/rng.hpp"
#include "linrl/ucrl_vtr.hpp"

namespace linrl {

struct EpisodeRecord {
  std::size_t episode = 0;  // one-based
  std::vector<std::size_t> states;
  std::vector<std::size_t> actions;
  double regret = 0.0;
  double cum_regret = 0.0;
  std::vector<double> bonuses;        // bonus at (s_h, a_h)
  std::vector<double> gaps;           // gap_h(s_h, a_h)
  std::vector<double> suboptimality;  // V*_h(s_h) - Q^{pi_k}_h(s_h, a_h)
  std::size_t optimism_violations = 0;
  std::size_t confidence_violations = 0;
  double decomposition_error = 0.0;
};

// Run-level numerical diagnostics.
struct RunDiagnostics {
  std::size_t optimism_violations = 0;
  std::size_t confidence_violations = 0;
  double max_decomposition_error = 0.0;
  double max_inverse_error = 0.0;  // maintained vs dense inverse, over all steps
  double max_inverse_drift = 0.0;
  std::vector<double> potential;        // per step
  std::vector<double> potential_bound;  // per step
  std::size_t potential_violations = 0;
  bool ridge_optimal = true;
};

struct RegretTrace {
  std::string algorithm;
  std::uint64_t seed = 0;
  double beta_scale = 1.0;
  double beta = 0.0;  // lsvi: constant; vtr: beta_K
  std::size_t horizon = 0;
  std::size_t feature_dim = 0;
  double delta = 0.01;
  double c_theta = 0.0;
  double gap_min = kInf;
  std::vector<EpisodeRecord> episodes;
  RunDiagnostics diagnostics;

  double cumulative_regret() const { return episodes.empty() ? 0.0 : episodes.back().cum_regret; }
};

// Objective lambda ||w||^2 + sum_i (phi_i^T w - y_i)^2 written through the
// sufficient statistics: w^T Lambda w - 2 b^T w (+ const). Checks that every
// +-eps coordinate perturbation does not decrease it.
inline bool ridge_perturbation_check(const GramState& g, const Eigen::VectorXd& b,
                                     const Eigen::VectorXd& w, double eps = 1e-4) {
  auto objective = [&](const Eigen::VectorXd& x) { return x.dot(g.matrix() * x) - 2.0 * b.dot(x); };
  const double base = objective(w);
  const double slack = 1e-12 * std::max(1.0, std::abs(base));
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    for (double sgn : {-1.0, 1.0}) {
      Eigen::VectorXd x = w;
      x[j] += sgn * eps;
      if (objective(x) < base - slack) return false;
    }
  }
  return true;
}

namespace detail {

inline void record_visit_diagnostics(const TabularMdp& m, const ExactSolution& sol,
                                     const PolicyValue& pv, const ValueTables& agent_q,
                                     const Trajectory& t, EpisodeRecord& rec, bool optimism) {
  const std::size_t H = m.horizon;
  rec.gaps.resize(H);
  rec.suboptimality.resize(H);
  for (std::size_t h = 0; h < H; ++h) {
    const std::size_t s = t.states[h], a = t.actions[h];
    rec.gaps[h] = sol.gap(h, s, a);
    rec.suboptimality[h] = sol.V(h, s) - pv.Q(h, s, a);
    if (optimism && agent_q.Q(h, s, a) < sol.Q(h, s, a) - 1e-9) ++rec.optimism_violations;
  }
}

}  // namespace detail

// One seeded run. Episode k draws its trajectory from stream (seed, k), so
// sampling does not depend on which diagnostics are enabled.
inline RegretTrace run_single(const ExperimentConfig& cfg, const Environment& env,
                              const ExactSolution& sol, std::uint64_t seed) {
  const TabularMdp& m = env.tabular;
  const std::size_t H = m.horizon, K = cfg.episodes;
  const double delta = cfg.effective_delta();
  RegretTrace trace;
  trace.algorithm = to_string(cfg.algorithm);
  trace.seed = seed;
  trace.beta_scale = cfg.hyper.beta_scale;
  trace.horizon = H;
  trace.delta = delta;
  trace.gap_min = sol.gap_min;
  trace.episodes.reserve(K);

  double cumulative = 0.0;
  auto finish_episode = [&](EpisodeRecord& rec, const Trajectory& t, const DeterministicPolicy& pi,
                            const ValueTables& q, const std::vector<double>& bonus) {
    const PolicyValue pv = evaluate_policy(m, pi);
    rec.states = t.states;
    rec.actions = t.actions;
    rec.regret = std::max(0.0, episode_regret(sol, pv, t.states[0]));
    cumulative += rec.regret;
    rec.cum_regret = cumulative;
    detail::record_visit_diagnostics(m, sol, pv, q, t, rec, cfg.diagnostics.optimism);
    rec.bonuses.resize(H);
    for (std::size_t h = 0; h < H; ++h)
      rec.bonuses[h] = bonus[(h * m.num_states + t.states[h]) * m.num_actions + t.actions[h]];
    if (cfg.diagnostics.decomposition) {
      const double gap_sum = expected_gap_sum(m, sol, pi, t.states[0]);
      rec.decomposition_error = std::abs(episode_regret(sol, pv, t.states[0]) - gap_sum);
      trace.diagnostics.max_decomposition_error =
          std::max(trace.diagnostics.max_decomposition_error, rec.decomposition_error);
    }
    trace.diagnostics.optimism_violations += rec.optimism_violations;
    trace.diagnostics.confidence_violations += rec.confidence_violations;
  };

  auto finish_linalg = [&](const auto& grams_of, double norm_bound,
                           const auto& final_target, const auto& final_weight) {
    trace.diagnostics.potential.resize(H);
    trace.diagnostics.potential_bound.resize(H);
    for (std::size_t h = 0; h < H; ++h) {
      const GramState& g = grams_of(h);
      trace.diagnostics.max_inverse_error =
          std::max(trace.diagnostics.max_inverse_error, g.inverse_error_vs_dense());
      trace.diagnostics.max_inverse_drift = std::max(trace.diagnostics.max_inverse_drift, g.inverse_drift());
      trace.diagnostics.potential[h] = g.potential();
      trace.diagnostics.potential_bound[h] = g.potential_bound(norm_bound);
      if (g.potential() > trace.diagnostics.potential_bound[h] * (1.0 + 1e-12))
        ++trace.diagnostics.potential_violations;
      if (!ridge_perturbation_check(g, final_target(h), final_weight(h))) trace.diagnostics.ridge_optimal = false;
    }
  };

  if (cfg.algorithm == Algorithm::kLsviUcb) {
    if (!env.linear) throw ValidationError("lsvi-ucb needs a linear MDP view of the environment");
    const LinearMdpEnv& lin = *env.linear;
    const double beta = lsvi_beta(lin.dim, H, static_cast<double>(K * H), delta, cfg.hyper.beta_scale);
    LsviAgent agent(lin, beta, cfg.hyper.lambda.value_or(1.0));
    trace.beta = beta;
    trace.feature_dim = lin.dim;
    for (std::size_t k = 1; k <= K; ++k) {
      const LsviPlan plan = agent.plan();
      const DeterministicPolicy pi = greedy_policy(plan.tables);
      Rng rng(seed, k);
      const Trajectory t = rollout(m, pi, rng);
      EpisodeRecord rec;
      rec.episode = k;
      finish_episode(rec, t, pi, plan.tables, plan.bonus);
      trace.episodes.push_back(std::move(rec));
      agent.update(t);
    }
    if (cfg.diagnostics.linalg) {
      const LsviPlan last = agent.plan();
      finish_linalg([&](std::size_t h) -> const GramState& { return agent.gram(h); }, 1.0,
                    [&](std::size_t h) { return agent.regression_target(h, last.tables.v_row(h + 1)); },
                    [&](std::size_t h) { return last.weights[h]; });
    }
  } else {
    if (!env.mixture) throw ValidationError("ucrl-vtr needs a linear mixture view of the environment");
    const LinearMixtureEnv& mix = *env.mixture;
    VtrParams params;
    params.lambda = cfg.hyper.lambda;
    params.beta_scale = cfg.hyper.beta_scale;
    params.delta = delta;
    params.clip = cfg.hyper.clip;
    VtrAgent agent(mix, params);
    trace.feature_dim = mix.dim;
    trace.c_theta = mix.c_theta;
    for (std::size_t k = 1; k <= K; ++k) {
      const VtrPlan plan = agent.plan();
      EpisodeRecord rec;
      rec.episode = k;
      if (cfg.diagnostics.confidence_set) {
        for (std::size_t h = 0; h < H; ++h) {
          const double r2 = agent.confidence_radius_sq(h, mix.theta(h), plan.theta[h]);
          if (r2 > plan.beta * plan.beta) ++rec.confidence_violations;
        }
      }
      const DeterministicPolicy pi = greedy_policy(plan.tables);
      Rng rng(seed, k);
      const Trajectory t = rollout(m, pi, rng);
      finish_episode(rec, t, pi, plan.tables, plan.bonus);
      trace.episodes.push_back(std::move(rec));
      agent.update(t, plan);
      trace.beta = plan.beta;
    }
    if (cfg.diagnostics.linalg) {
      const auto theta = agent.estimates();
      finish_linalg([&](std::size_t h) -> const GramState& { return agent.gram(h); },
                    static_cast<double>(H),
                    [&](std::size_t h) { return agent.target(h); },
                    [&](std::size_t h) { return theta[h]; });
    }
  }
  return trace;
}

/// Runs every seed of `cfg`, in parallel, returning traces in seed order.
inline std::vector<RegretTrace> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto env = build_environment(cfg.environment);
  const ExactSolution sol = solve_optimal(env->tabular);
  if (cfg.diagnostics.peeling) sol.require_gap_min();
  std::vector<RegretTrace> traces(cfg.seeds.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), cfg.seeds.size()));
  std::vector<std::exception_ptr> errors(cfg.seeds.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < cfg.seeds.size(); i += workers) {
          try {
            traces[i] = run_single(cfg, *env, sol, cfg.seeds[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return traces;
}

}  // namespace linrl
