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

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "linrl/common.hpp"
#include "linrl/generators.hpp"
#include "linrl/hard_instance.hpp"
#include "linrl/linear_env.hpp"
#include "linrl/tabular.hpp"

namespace linrl {

enum class Algorithm { kLsviUcb, kUcrlVtr };

inline std::string to_string(Algorithm a) { return a == Algorithm::kLsviUcb ? "lsvi-ucb" : "ucrl-vtr"; }

inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "lsvi-ucb") return Algorithm::kLsviUcb;
  if (s == "ucrl-vtr") return Algorithm::kUcrlVtr;
  throw ValidationError("unknown algorithm '" + s + "' (expected lsvi-ucb or ucrl-vtr)");
}

struct EnvironmentSpec {
  std::string type = "hard_instance";
  // random constructors
  std::size_t d = 3, S = 3, A = 2, H = 3;
  std::uint64_t seed = 0;
  // hard instance
  double gap = 0.05;
  std::optional<double> escape;
  std::vector<std::vector<int>> signs;
  bool lower_bound_conditions = true;
};

struct Hyperparameters {
  std::optional<double> lambda;  // lsvi-ucb: 1, ucrl-vtr: H^2 d
  double beta_scale = 1.0;
  double delta = 0.01;
  std::string delta_preset = "fixed";  // or "expected_regret": 1/(2K(K+1)H^3)
  bool clip = true;
};

struct Diagnostics {
  bool optimism = true;
  bool decomposition = true;
  bool confidence_set = true;
  bool peeling = true;
  bool linalg = true;
};

struct OutputSpec {
  std::string dir = "out";
  std::vector<std::string> formats{"csv"};
};

struct ExperimentConfig {
  int schema_version = 1;
  EnvironmentSpec environment;
  Algorithm algorithm = Algorithm::kLsviUcb;
  Hyperparameters hyper;
  std::size_t episodes = 1000;
  std::vector<std::uint64_t> seeds{0};
  std::vector<double> sweep_beta_scales{1.0, 0.1, 0.01};
  Diagnostics diagnostics;
  OutputSpec output;

  double effective_delta() const {
    if (hyper.delta_preset == "expected_regret") {
      const std::size_t H = environment.H;
      return 1.0 / (2.0 * static_cast<double>(episodes) * (static_cast<double>(episodes) + 1.0) *
                    static_cast<double>(H * H * H));
    }
    return hyper.delta;
  }

  void validate() const {
    require(schema_version == 1, "unsupported schema_version " + std::to_string(schema_version));
    require(episodes >= 1, "episodes (K) must be >= 1");
    require(!seeds.empty(), "at least one run seed is required");
    require(hyper.beta_scale >= 0.0, "beta_scale must be non-negative");
    require(hyper.delta_preset == "fixed" || hyper.delta_preset == "expected_regret",
            "delta_preset must be 'fixed' or 'expected_regret'");
    const double delta = effective_delta();
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
    if (hyper.lambda) require(*hyper.lambda > 0.0, "lambda must be positive");
    for (double c : sweep_beta_scales) require(c >= 0.0, "sweep beta scales must be non-negative");
    const auto& t = environment.type;
    require(t == "hard_instance" || t == "random_linear_mdp" || t == "random_linear_mixture" ||
                t == "random_tabular",
            "unknown environment type '" + t + "'");
    if (algorithm == Algorithm::kLsviUcb) {
      require(t != "random_linear_mixture", "lsvi-ucb needs a linear MDP environment");
    } else {
      require(t == "hard_instance" || t == "random_linear_mixture",
              "ucrl-vtr needs a linear mixture environment");
    }
    for (const auto& f : output.formats)
      require(f == "csv" || f == "json" || f == "svg", "unknown output format '" + f + "'");
  }
};

// Immutable environment bundle: the ground-truth kernel plus whichever
// linear views the constructor provides.
struct Environment {
  std::string type;
  TabularMdp tabular;
  std::optional<LinearMdpEnv> linear;
  std::optional<LinearMixtureEnv> mixture;
  std::optional<HardInstanceSpec> hard;
};

inline std::shared_ptr<const Environment> build_environment(const EnvironmentSpec& spec) {
  auto env = std::make_shared<Environment>();
  env->type = spec.type;
  if (spec.type == "hard_instance") {
    HardInstanceSpec hs;
    hs.d = spec.d;
    hs.horizon = spec.H;
    hs.gap = spec.gap;
    hs.escape = spec.escape;
    hs.signs = spec.signs;
    hs.lower_bound_conditions = spec.lower_bound_conditions;
    auto inst = make_hard_instance(hs);
    env->tabular = std::move(inst.tabular);
    env->linear = std::move(inst.linear);
    env->mixture = std::move(inst.mixture);
    env->hard = hs;
  } else if (spec.type == "random_linear_mdp") {
    env->linear = make_random_linear_mdp(spec.d, spec.S, spec.A, spec.H, spec.seed);
    env->tabular = env->linear->to_tabular();
  } else if (spec.type == "random_linear_mixture") {
    env->mixture = make_random_linear_mixture(spec.d, spec.S, spec.A, spec.H, spec.seed);
    env->tabular = env->mixture->to_tabular();
  } else if (spec.type == "random_tabular") {
    env->tabular = make_random_tabular(spec.S, spec.A, spec.H, spec.seed);
    env->linear = tabular_one_hot_embed(env->tabular);
  } else {
    throw ValidationError("unknown environment type '" + spec.type + "'");
  }
  return env;
}

// ---- JSON ----------------------------------------------------------------

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig c;
    c.schema_version = j.value("schema_version", 0);
    require(c.schema_version == 1, "config requires \"schema_version\": 1");
    const auto& e = j.at("environment");
    c.environment.type = e.value("type", c.environment.type);
    c.environment.d = e.value("d", c.environment.d);
    c.environment.S = e.value("S", c.environment.S);
    c.environment.A = e.value("A", c.environment.A);
    c.environment.H = e.value("H", c.environment.H);
    c.environment.seed = e.value("seed", c.environment.seed);
    c.environment.gap = e.value("gap", c.environment.gap);
    if (e.contains("escape") && !e.at("escape").is_null()) c.environment.escape = e.at("escape").get<double>();
    if (e.contains("signs") && !e.at("signs").is_null())
      c.environment.signs = e.at("signs").get<std::vector<std::vector<int>>>();
    c.environment.lower_bound_conditions = e.value("lower_bound_conditions", true);
    c.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    if (j.contains("hyperparameters")) {
      const auto& h = j.at("hyperparameters");
      if (h.contains("lambda") && !h.at("lambda").is_null()) c.hyper.lambda = h.at("lambda").get<double>();
      c.hyper.beta_scale = h.value("beta_scale", c.hyper.beta_scale);
      c.hyper.delta = h.value("delta", c.hyper.delta);
      c.hyper.delta_preset = h.value("delta_preset", c.hyper.delta_preset);
      c.hyper.clip = h.value("clip", c.hyper.clip);
    }
    c.episodes = j.at("episodes").get<std::size_t>();
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("sweep")) c.sweep_beta_scales = j.at("sweep").value("beta_scales", c.sweep_beta_scales);
    if (j.contains("diagnostics")) {
      const auto& d = j.at("diagnostics");
      c.diagnostics.optimism = d.value("optimism", true);
      c.diagnostics.decomposition = d.value("decomposition", true);
      c.diagnostics.confidence_set = d.value("confidence_set", true);
      c.diagnostics.peeling = d.value("peeling", true);
      c.diagnostics.linalg = d.value("linalg", true);
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      c.output.dir = o.value("dir", c.output.dir);
      c.output.formats = o.value("formats", c.output.formats);
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed config: ") + ex.what());
  }
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json env{{"type", c.environment.type},       {"d", c.environment.d},
                     {"S", c.environment.S},             {"A", c.environment.A},
                     {"H", c.environment.H},             {"seed", c.environment.seed},
                     {"gap", c.environment.gap},         {"lower_bound_conditions", c.environment.lower_bound_conditions}};
  env["escape"] = c.environment.escape ? nlohmann::json(*c.environment.escape) : nlohmann::json(nullptr);
  if (!c.environment.signs.empty()) env["signs"] = c.environment.signs;
  nlohmann::json hyper{{"beta_scale", c.hyper.beta_scale},
                       {"delta", c.hyper.delta},
                       {"delta_preset", c.hyper.delta_preset},
                       {"clip", c.hyper.clip}};
  hyper["lambda"] = c.hyper.lambda ? nlohmann::json(*c.hyper.lambda) : nlohmann::json(nullptr);
  return {{"schema_version", c.schema_version},
          {"environment", env},
          {"algorithm", to_string(c.algorithm)},
          {"hyperparameters", hyper},
          {"episodes", c.episodes},
          {"seeds", c.seeds},
          {"sweep", {{"beta_scales", c.sweep_beta_scales}}},
          {"diagnostics",
           {{"optimism", c.diagnostics.optimism},
            {"decomposition", c.diagnostics.decomposition},
            {"confidence_set", c.diagnostics.confidence_set},
            {"peeling", c.diagnostics.peeling},
            {"linalg", c.diagnostics.linalg}}},
          {"output", {{"dir", c.output.dir}, {"formats", c.output.formats}}}};
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + ex.what());
  }
  return config_from_json(j);
}

}  // namespace linrl
