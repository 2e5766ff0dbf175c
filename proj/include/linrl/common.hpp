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

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace linrl {

// Thrown when constructor parameters or configuration are invalid.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown on out-of-range state/action/step indices.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Thrown when a diagnostic or oracle cannot produce a defined answer.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerance for probability normalization and negative-mass clamping.
inline constexpr double kProbTol = 1e-12;

/// Gaps below this are treated as exact zeros when computing gap_min.
inline constexpr double kGapZeroTol = 1e-9;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

inline void check_index(std::size_t i, std::size_t n, const char* what) {
  if (i >= n) {
    throw IndexError(std::string(what) + " index " + std::to_string(i) +
                     " out of range [0, " + std::to_string(n) + ")");
  }
}

// Clamps a probability computed as an inner product. Values below
// -kProbTol indicate an invalid model rather than rounding noise.
inline double clamp_probability(double p) {
  if (!std::isfinite(p)) throw ValidationError("non-finite transition probability");
  if (p < -kProbTol) {
    throw ValidationError("negative transition probability " + std::to_string(p));
  }
  if (p > 1.0 + kProbTol) {
    throw ValidationError("transition probability above one " + std::to_string(p));
  }
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

}  // namespace linrl
