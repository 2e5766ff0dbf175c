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

// Umbrella header.

#include "linrl/common.hpp"
#include "linrl/config.hpp"
#include "linrl/dp_oracle.hpp"
#include "linrl/episode.hpp"
#include "linrl/experiment.hpp"
#include "linrl/export.hpp"
#include "linrl/generators.hpp"
#include "linrl/gram.hpp"
#include "linrl/hard_instance.hpp"
#include "linrl/linear_env.hpp"
#include "linrl/lsvi_ucb.hpp"
#include "linrl/peeling.hpp"
#include "linrl/regret_fit.hpp"
#include "linrl/rng.hpp"
#include "linrl/serialization.hpp"
#include "linrl/sweep.hpp"
#include "linrl/tabular.hpp"
#include "linrl/ucrl_vtr.hpp"
