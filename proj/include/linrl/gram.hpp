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

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "linrl/common.hpp"

namespace linrl {

/// Max-entry drift tolerated between Lambda * Lambda^{-1} and I before the
/// maintained inverse is rebuilt from a fresh factorization.
inline constexpr double kInverseDriftTol = 1e-8;

// Regularized Gram matrix Lambda = lambda I + sum_i phi_i phi_i^T together with
// its inverse, kept in sync by Sherman-Morrison updates. Also accumulates the
// elliptical potential sum_i phi_i^T Lambda_{i-1}^{-1} phi_i, where Lambda_{i-1}
// is the matrix before the i-th update.
class GramState {
 public:
  GramState() = default;

  GramState(std::size_t dim, double lambda)
      : dim_(dim),
        lambda_(lambda),
        gram_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) *
              lambda),
        inverse_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) /
                 lambda) {
    require(dim >= 1, "Gram dimension must be >= 1");
    require(lambda > 0.0 && std::isfinite(lambda), "regularizer lambda must be positive");
  }

  std::size_t dim() const { return dim_; }
  double lambda() const { return lambda_; }
  std::size_t count() const { return count_; }
  double potential() const { return potential_; }
  double max_sq_norm() const { return max_sq_norm_; }
  std::size_t refactorizations() const { return refactorizations_; }
  const Eigen::MatrixXd& matrix() const { return gram_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }

  /// phi^T Lambda^{-1} phi, with rounding negatives clamped to zero.
  double quadratic_form(const Eigen::Ref<const Eigen::VectorXd>& phi) const {
    check_input(phi);
    return clamp_quadratic((inverse_ * phi).dot(phi));
  }

  void rank1_update(const Eigen::Ref<const Eigen::VectorXd>& phi) {
    check_input(phi);
    const Eigen::VectorXd u = inverse_ * phi;
    const double q = clamp_quadratic(u.dot(phi));
    potential_ += q;
    max_sq_norm_ = std::max(max_sq_norm_, phi.squaredNorm());
    ++count_;
    if (q == 0.0 && phi.squaredNorm() == 0.0) return;
    gram_.noalias() += phi * phi.transpose();
    inverse_.noalias() -= (u * u.transpose()) / (1.0 + q);
    inverse_ = 0.5 * (inverse_ + inverse_.transpose()).eval();
    if (inverse_drift() > kInverseDriftTol) refactorize();
  }

  /// Lambda^{-1} b.
  Eigen::VectorXd ridge_solve(const Eigen::Ref<const Eigen::VectorXd>& b) const {
    if (static_cast<std::size_t>(b.size()) != dim_) throw ValidationError("ridge target has wrong dimension");
    if (!b.allFinite()) throw ValidationError("non-finite ridge target");
    return inverse_ * b;
  }

  /// ||Lambda Lambda^{-1} - I||_max.
  double inverse_drift() const {
    const auto n = static_cast<Eigen::Index>(dim_);
    return (gram_ * inverse_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  }

  /// Max-entry difference between the maintained inverse and a fresh dense inverse.
  double inverse_error_vs_dense() const {
    const Eigen::MatrixXd dense = gram_.llt().solve(
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_)));
    return (dense - inverse_).cwiseAbs().maxCoeff();
  }

  // 2 d log((lambda + k L^2) / lambda) with L the largest feature norm seen
  // (at least `norm_bound`). Valid when lambda >= L^2.
  double potential_bound(double norm_bound = 0.0) const {
    const double l2 = std::max(max_sq_norm_, norm_bound * norm_bound);
    return 2.0 * static_cast<double>(dim_) *
           std::log((lambda_ + static_cast<double>(count_) * l2) / lambda_);
  }

  void refactorize() {
    const auto n = static_cast<Eigen::Index>(dim_);
    inverse_ = gram_.llt().solve(Eigen::MatrixXd::Identity(n, n));
    inverse_ = 0.5 * (inverse_ + inverse_.transpose()).eval();
    ++refactorizations_;
  }

 private:
  void check_input(const Eigen::Ref<const Eigen::VectorXd>& phi) const {
    if (static_cast<std::size_t>(phi.size()) != dim_) {
      throw ValidationError("feature has dimension " + std::to_string(phi.size()) + ", expected " +
                            std::to_string(dim_));
    }
    if (!phi.allFinite()) throw ValidationError("non-finite feature vector");
  }

  static double clamp_quadratic(double q) {
    if (q < 0.0) {
      if (q < -1e-12) throw OracleError("Gram inverse lost positive definiteness");
      return 0.0;
    }
    return q;
  }

  std::size_t dim_ = 0;
  double lambda_ = 1.0;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd inverse_;
  std::size_t count_ = 0;
  double potential_ = 0.0;
  double max_sq_norm_ = 0.0;
  std::size_t refactorizations_ = 0;
};

}  // namespace linrl
