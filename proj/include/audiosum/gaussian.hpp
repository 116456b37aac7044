// Copyright 2026 The audiosum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "audiosum/features.hpp"
#include "audiosum/random.hpp"

namespace audiosum {

class GaussianError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full-covariance single Gaussian model with a cached Cholesky factor.
/// Immutable after construction.
class Sgm {
 public:
  /// Factorizes `covariance` as given; throws if it is not positive definite.
  static Sgm from_moments(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  /// Lower-triangular L with L * L^T = covariance.
  const Eigen::MatrixXd& chol() const { return chol_; }
  double log_det() const { return log_det_; }
  Eigen::Index dim() const { return mean_.size(); }
  /// Shrinkage factor that was applied during estimation (0 if none).
  double shrinkage() const { return shrinkage_; }

  /// L^{-1} (x - mean).
  Eigen::VectorXd whiten(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Rows mapped through whiten().
  RowMatrix whiten_rows(const RowMatrix& x) const;

  double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Cheap condition estimate (max L_ii / min L_ii)^2, a lower bound on the
  /// spectral condition number.
  double condition_estimate() const;

  /// Text form: dim, mean, lower triangle of the covariance (row-major),
  /// all with 17 significant digits.
  std::string to_text() const;
  static Sgm from_text(const std::string& text);

 private:
  Sgm() = default;
  friend Sgm estimate_sgm(const FeatureSequence&);

  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd chol_;
  double log_det_ = 0.0;
  double shrinkage_ = 0.0;
};

inline constexpr double kInitialShrinkage = 1e-6;
inline constexpr double kMaxShrinkage = 1e-2;
inline constexpr double kKlClampWindow = 1e-9;
inline constexpr double kMaxCondition = 1e12;
inline constexpr double kUnshrunkCondition = 1e10;

/// Sample mean and maximum-likelihood covariance S. S is used as is when it
/// factorizes with a condition estimate up to kUnshrunkCondition; otherwise
/// it is shrunk toward a scaled identity, S + delta * tr(S)/k * I, with delta
/// escalating from 1e-6 by factors of 10 (at most 1e-2) until the Cholesky
/// factorization succeeds.
Sgm estimate_sgm(const FeatureSequence& features);

/// D_KL(p || q) in nats, p the reference model and q its approximation.
double kl_divergence(const Sgm& p, const Sgm& q);

double mahalanobis(const Eigen::Ref<const Eigen::VectorXd>& x, const Sgm& g);

/// mean + L z with z ~ N(0, I) drawn from `rng`.
Eigen::VectorXd sample(const Sgm& g, RandomStream& rng);

/// Monte Carlo estimate of D_KL(p || q) from `n_draws` samples of p.
double mc_kl_estimate(const Sgm& p, const Sgm& q, long n_draws,
                      RandomStream& rng);

}  // namespace audiosum
