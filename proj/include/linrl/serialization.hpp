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
#include <string>
#include <vector>

#include "json.hpp"
#include "linrl/common.hpp"
#include "linrl/linear_env.hpp"
#include "linrl/tabular.hpp"

namespace linrl {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline void expect_kind(const Json& j, const char* kind) {
  if (!j.contains("kind") || j.at("kind").get<std::string>() != kind) {
    throw ValidationError(std::string("expected a serialized ") + kind);
  }
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw ValidationError("unsupported schema_version");
  }
}

inline std::vector<double> read_array(const Json& j, const char* key, std::size_t expected) {
  auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != expected) {
    throw ValidationError(std::string("field '") + key + "' has " + std::to_string(v.size()) +
                          " entries, expected " + std::to_string(expected));
  }
  return v;
}

}  // namespace detail

// All arrays are flattened in the row-major order of the in-memory layout.
// Doubles are written with round-trip precision, so parse(dump(x)) == x bitwise.

inline Json to_json(const TabularMdp& m) {
  return Json{{"schema_version", kSchemaVersion},
              {"kind", "tabular_mdp"},
              {"dims", {{"S", m.num_states}, {"A", m.num_actions}, {"H", m.horizon}}},
              {"transitions", m.transitions},
              {"rewards", m.rewards},
              {"initial_distribution", m.initial_distribution}};
}

inline TabularMdp tabular_from_json(const Json& j) {
  detail::expect_kind(j, "tabular_mdp");
  const auto& dims = j.at("dims");
  TabularMdp m(dims.at("S").get<std::size_t>(), dims.at("A").get<std::size_t>(),
               dims.at("H").get<std::size_t>());
  m.transitions = detail::read_array(j, "transitions", m.transitions.size());
  m.rewards = detail::read_array(j, "rewards", m.rewards.size());
  m.initial_distribution = detail::read_array(j, "initial_distribution", m.num_states);
  m.validate();
  return m;
}

inline Json to_json(const LinearMdpEnv& e) {
  return Json{{"schema_version", kSchemaVersion},
              {"kind", "linear_mdp"},
              {"construction", e.construction},
              {"seed", e.seed},
              {"dims", {{"S", e.num_states}, {"A", e.num_actions}, {"H", e.horizon}, {"d", e.dim}}},
              {"features", e.features},
              {"measures", e.measures},
              {"reward_params", e.reward_params},
              {"initial_distribution", e.initial_distribution}};
}

inline LinearMdpEnv linear_mdp_from_json(const Json& j) {
  detail::expect_kind(j, "linear_mdp");
  const auto& dims = j.at("dims");
  LinearMdpEnv e(dims.at("S").get<std::size_t>(), dims.at("A").get<std::size_t>(),
                 dims.at("H").get<std::size_t>(), dims.at("d").get<std::size_t>());
  e.construction = j.value("construction", std::string{});
  e.seed = j.value("seed", std::uint64_t{0});
  e.features = detail::read_array(j, "features", e.features.size());
  e.measures = detail::read_array(j, "measures", e.measures.size());
  e.reward_params = detail::read_array(j, "reward_params", e.reward_params.size());
  e.initial_distribution = detail::read_array(j, "initial_distribution", e.num_states);
  e.validate();
  return e;
}

inline Json to_json(const LinearMixtureEnv& e) {
  return Json{{"schema_version", kSchemaVersion},
              {"kind", "linear_mixture"},
              {"construction", e.construction},
              {"seed", e.seed},
              {"dims", {{"S", e.num_states}, {"A", e.num_actions}, {"H", e.horizon}, {"d", e.dim}}},
              {"c_theta", e.c_theta},
              {"triplet_features", e.triplet_features},
              {"theta_star", e.theta_star},
              {"rewards", e.rewards},
              {"initial_distribution", e.initial_distribution}};
}

inline LinearMixtureEnv linear_mixture_from_json(const Json& j) {
  detail::expect_kind(j, "linear_mixture");
  const auto& dims = j.at("dims");
  LinearMixtureEnv e(dims.at("S").get<std::size_t>(), dims.at("A").get<std::size_t>(),
                     dims.at("H").get<std::size_t>(), dims.at("d").get<std::size_t>());
  e.construction = j.value("construction", std::string{});
  e.seed = j.value("seed", std::uint64_t{0});
  e.c_theta = j.at("c_theta").get<double>();
  e.triplet_features = detail::read_array(j, "triplet_features", e.triplet_features.size());
  e.theta_star = detail::read_array(j, "theta_star", e.theta_star.size());
  e.rewards = detail::read_array(j, "rewards", e.rewards.size());
  e.initial_distribution = detail::read_array(j, "initial_distribution", e.num_states);
  e.validate();
  return e;
}

}  // namespace linrl
