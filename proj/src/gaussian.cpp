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

#include "audiosum/gaussian.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace audiosum {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double log_det_from_chol(const Eigen::MatrixXd& L) {
  return 2.0 * L.diagonal().array().log().sum();
}

bool factorize(const Eigen::MatrixXd& cov, Eigen::MatrixXd& chol) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) return false;
  chol = llt.matrixL();
  return (chol.diagonal().array() > 0.0).all() && chol.allFinite();
}

}  // namespace

Sgm Sgm::from_moments(Eigen::VectorXd mean, Eigen::MatrixXd covariance) {
  const Eigen::Index k = mean.size();
  if (k == 0 || covariance.rows() != k || covariance.cols() != k) {
    throw GaussianError("Sgm: mean/covariance size mismatch");
  }
  if (!mean.allFinite() || !covariance.allFinite()) throw GaussianError("Sgm: non-finite parameters");
  const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, covariance.cwiseAbs().maxCoeff())) {
    throw GaussianError("Sgm: covariance is not symmetric");
  }
  Sgm g;
  g.mean_ = std::move(mean);
  g.covariance_ = 0.5 * (covariance + covariance.transpose());
  if (!factorize(g.covariance_, g.chol_)) throw GaussianError("Sgm: covariance is not positive definite");
  g.log_det_ = log_det_from_chol(g.chol_);
  return g;
}

Eigen::VectorXd Sgm::whiten(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dim()) throw GaussianError("Sgm: dimension mismatch");
  return chol_.triangularView<Eigen::Lower>().solve(x - mean_);
}

RowMatrix Sgm::whiten_rows(const RowMatrix& x) const {
  if (x.cols() != dim()) throw GaussianError("Sgm: dimension mismatch");
  Eigen::MatrixXd centered = (x.rowwise() - mean_.transpose()).transpose();
  chol_.triangularView<Eigen::Lower>().solveInPlace(centered);
  return centered.transpose();
}

double Sgm::log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return -0.5 * (static_cast<double>(dim()) * kLog2Pi + log_det_ + whiten(x).squaredNorm());
}

double Sgm::condition_estimate() const {
  const auto d = chol_.diagonal().array();
  const double r = d.maxCoeff() / d.minCoeff();
  return r * r;
}

std::string Sgm::to_text() const {
  std::ostringstream out;
  char buf[32];
  out << dim() << '\n';
  for (Eigen::Index i = 0; i < dim(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", mean_[i]);
    out << (i ? " " : "") << buf;
  }
  out << '\n';
  for (Eigen::Index r = 0; r < dim(); ++r) {
    for (Eigen::Index c = 0; c <= r; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", covariance_(r, c));
      out << (c ? " " : "") << buf;
    }
    out << '\n';
  }
  return out.str();
}

Sgm Sgm::from_text(const std::string& text) {
  std::istringstream in(text);
  Eigen::Index k = 0;
  if (!(in >> k) || k < 1) throw GaussianError("Sgm text: bad dimension");
  Eigen::VectorXd mean(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(in >> mean[i])) throw GaussianError("Sgm text: truncated mean");
  }
  Eigen::MatrixXd cov(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c <= r; ++c) {
      if (!(in >> cov(r, c))) throw GaussianError("Sgm text: truncated covariance");
      cov(c, r) = cov(r, c);
    }
  }
  return from_moments(std::move(mean), std::move(cov));
}

Sgm estimate_sgm(const FeatureSequence& features) {
  const RowMatrix& x = features.vectors;
  const Eigen::Index n = x.rows();
  const Eigen::Index k = x.cols();
  if (n < 2) throw GaussianError("estimate_sgm: need at least 2 vectors");
  if (k < 1) throw GaussianError("estimate_sgm: zero-dimensional features");
  if (!x.allFinite()) throw GaussianError("estimate_sgm: non-finite feature values");

  Sgm g;
  g.mean_ = x.colwise().mean().transpose();
  const RowMatrix centered = x.rowwise() - g.mean_.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
  cov = 0.5 * (cov + cov.transpose());

  const double scale = cov.trace() / static_cast<double>(k);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw GaussianError("estimate_sgm: degenerate covariance (zero variance)");
  }
  if (factorize(cov, g.chol_)) {
    const auto d = g.chol_.diagonal().array();
    const double r = d.maxCoeff() / d.minCoeff();
    if (r * r <= kUnshrunkCondition) {
      g.covariance_ = std::move(cov);
      g.log_det_ = log_det_from_chol(g.chol_);
      return g;
    }
  }
  for (double delta = kInitialShrinkage; delta <= kMaxShrinkage * 1.000001; delta *= 10.0) {
    Eigen::MatrixXd shrunk = cov;
    shrunk.diagonal().array() += delta * scale;
    if (factorize(shrunk, g.chol_)) {
      g.covariance_ = std::move(shrunk);
      g.log_det_ = log_det_from_chol(g.chol_);
      g.shrinkage_ = delta;
      return g;
    }
  }
  throw GaussianError("estimate_sgm: covariance not positive definite after shrinkage");
}

double kl_divergence(const Sgm& p, const Sgm& q) {
  if (p.dim() != q.dim()) throw GaussianError("kl_divergence: dimension mismatch");
  if (p.mean() == q.mean() && p.covariance() == q.covariance()) return 0.0;
  if (q.condition_estimate() > kMaxCondition) {
    throw GaussianError("kl_divergence: approximating covariance is ill-conditioned");
  }
  const auto Lq = q.chol().triangularView<Eigen::Lower>();
  const double trace_term = Lq.solve(p.chol()).squaredNorm();
  const double mean_term = Lq.solve(q.mean() - p.mean()).squaredNorm();
  const double kl = 0.5 * (trace_term + mean_term - static_cast<double>(p.dim()) +
                           q.log_det() - p.log_det());
  if (!std::isfinite(kl)) throw GaussianError("kl_divergence: non-finite result");
  if (kl < 0.0) {
    if (kl < -kKlClampWindow) throw GaussianError("kl_divergence: negative result");
    return 0.0;
  }
  return kl;
}

double mahalanobis(const Eigen::Ref<const Eigen::VectorXd>& x, const Sgm& g) {
  return g.whiten(x).norm();
}

Eigen::VectorXd sample(const Sgm& g, RandomStream& rng) {
  Eigen::VectorXd z(g.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return g.mean() + g.chol().triangularView<Eigen::Lower>() * z;
}

double mc_kl_estimate(const Sgm& p, const Sgm& q, long n_draws, RandomStream& rng) {
  if (p.dim() != q.dim()) throw GaussianError("mc_kl_estimate: dimension mismatch");
  if (n_draws < 1) throw GaussianError("mc_kl_estimate: need at least one draw");
  const Eigen::Index k = p.dim();
  constexpr long kBatch = 8192;
  const auto Lp = p.chol().triangularView<Eigen::Lower>();
  const auto Lq = q.chol().triangularView<Eigen::Lower>();
  double total = 0.0;
  Eigen::MatrixXd z(k, kBatch);
  for (long done = 0; done < n_draws; done += kBatch) {
    const long m = std::min(kBatch, n_draws - done);
    for (long j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < k; ++i) z(i, j) = rng.normal();
    }
    Eigen::MatrixXd x = Lp * z.leftCols(m);
    x.colwise() += p.mean();
    Eigen::MatrixXd wp = x.colwise() - p.mean();
    Lp.solveInPlace(wp);
    Eigen::MatrixXd wq = x.colwise() - q.mean();
    Lq.solveInPlace(wq);
    const Eigen::ArrayXd diff =
        0.5 * (wq.colwise().squaredNorm() - wp.colwise().squaredNorm()).transpose().array();
    total += diff.sum();
  }
  return total / static_cast<double>(n_draws) + 0.5 * (q.log_det() - p.log_det());
}

}  // namespace audiosum
