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

// Dense, literal references for the rankers. Each follows the textbook
// definition as directly as possible: eigen-solutions instead of power
// iteration, explicit inverses instead of solves, enumeration instead of
// greedy loops.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

inline bool tied(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Lowest index among entries tied with the maximum over `allowed`.
inline std::size_t best_index(const std::vector<double>& v, const std::vector<bool>& allowed) {
  double top = -INFINITY;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (allowed[i]) top = std::max(top, v[i]);
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (allowed[i] && tied(v[i], top)) return i;
  }
  return v.size();
}

// Descending by value; among tied values, ascending index.
inline std::vector<std::size_t> sort_desc(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  std::vector<bool> left(v.size(), true);
  for (std::size_t t = 0; t < v.size(); ++t) {
    const std::size_t i = best_index(v, left);
    out.push_back(i);
    left[i] = false;
  }
  return out;
}

inline double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = std::sqrt(a.dot(a));
  const double nb = std::sqrt(b.dot(b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

// --- GRASSHOPPER -----------------------------------------------------------

inline std::vector<std::size_t> grasshopper(const Eigen::MatrixXd& W, const Eigen::VectorXd& r,
                                            double lambda) {
  const Eigen::Index n = W.rows();
  Eigen::MatrixXd P(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row = W.row(i).sum();
    for (Eigen::Index j = 0; j < n; ++j) P(i, j) = lambda * W(i, j) / row + (1.0 - lambda) * r[j];
  }
  // Stationary distribution: eigenvector of P^T for the eigenvalue closest to 1.
  Eigen::EigenSolver<Eigen::MatrixXd> es(P.transpose());
  Eigen::Index pick = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (std::abs(es.eigenvalues()[i] - 1.0) < std::abs(es.eigenvalues()[pick] - 1.0)) pick = i;
  }
  Eigen::VectorXd pi = es.eigenvectors().col(pick).real();
  pi /= pi.sum();

  std::vector<std::size_t> order;
  std::vector<bool> unranked(static_cast<std::size_t>(n), true);
  std::vector<double> pv(pi.data(), pi.data() + n);
  order.push_back(best_index(pv, unranked));
  unranked[order.back()] = false;

  while (order.size() < static_cast<std::size_t>(n)) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (unranked[static_cast<std::size_t>(i)]) idx.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd IQ = Eigen::MatrixXd::Identity(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) IQ(a, b) -= P(idx[a], idx[b]);
    }
    const Eigen::MatrixXd N = IQ.inverse();
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index b = 0; b < m; ++b) {
      v[static_cast<std::size_t>(idx[b])] = N.col(b).sum() / static_cast<double>(m);
    }
    order.push_back(best_index(v, unranked));
    unranked[order.back()] = false;
  }
  return order;
}

// --- LSA -------------------------------------------------------------------

struct LsaResult {
  int k = 0;
  std::vector<double> scores;
  std::vector<std::size_t> order;
};

// Right singular vectors and singular values from the eigen-decomposition of A^T A.
inline LsaResult lsa(const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd G = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const Eigen::Index n = G.rows();
  std::vector<double> sigma(static_cast<std::size_t>(n));
  std::vector<Eigen::VectorXd> v;
  for (Eigen::Index i = n - 1; i >= 0; --i) {  // eigenvalues ascend
    sigma[static_cast<std::size_t>(n - 1 - i)] = std::sqrt(std::max(0.0, es.eigenvalues()[i]));
    v.push_back(es.eigenvectors().col(i));
  }
  LsaResult out;
  for (double s : sigma) {
    if (s >= sigma[0] / 2.0) ++out.k;
  }
  out.scores.assign(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = 0; i < out.k; ++i) {
      acc += v[static_cast<std::size_t>(i)][j] * v[static_cast<std::size_t>(i)][j] *
             sigma[static_cast<std::size_t>(i)] * sigma[static_cast<std::size_t>(i)];
    }
    out.scores[static_cast<std::size_t>(j)] = std::sqrt(acc);
  }
  out.order = sort_desc(out.scores);
  return out;
}

// --- MMR -------------------------------------------------------------------

// Enumerates every selection order and returns the one in which each pick
// attains the maximal MMR value among the remaining items (lowest index
// among ties).
inline std::vector<std::size_t> mmr_enumerate(const std::vector<Eigen::VectorXd>& vecs,
                                              double lambda) {
  const std::size_t n = vecs.size();
  Eigen::VectorXd q = Eigen::VectorXd::Zero(vecs[0].size());
  for (const auto& v : vecs) q += v;
  q /= static_cast<double>(n);

  auto value = [&](std::size_t i, const std::vector<std::size_t>& chosen) {
    double red = 0.0;
    if (!chosen.empty()) {
      red = -INFINITY;
      for (std::size_t j : chosen) red = std::max(red, cosine(vecs[i], vecs[j]));
    }
    return lambda * cosine(vecs[i], q) - (1.0 - lambda) * red;
  };

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    std::vector<std::size_t> chosen;
    for (std::size_t t = 0; t < n && ok; ++t) {
      std::vector<double> vals(n, -INFINITY);
      std::vector<bool> left(n, true);
      for (std::size_t c : chosen) left[c] = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (left[i]) vals[i] = value(i, chosen);
      }
      ok = best_index(vals, left) == perm[t];
      chosen.push_back(perm[t]);
    }
    if (ok) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {};
}

// --- Support sets ----------------------------------------------------------

// Literal transcription. Tie table:
//   nearer-centroid ties       -> first cluster
//   most-similar-phrase ties   -> lowest index
inline std::vector<double> support_scores(const std::vector<Eigen::VectorXd>& vecs) {
  const std::size_t n = vecs.size();
  std::vector<int> label(n, 0);
  Eigen::VectorXd c0 = vecs[0], c1 = vecs[1];
  std::vector<std::size_t> members0{0}, members1{1};
  label[1] = 1;
  for (std::size_t i = 2; i < n; ++i) {
    const double s0 = cosine(vecs[i], c0);
    const double s1 = cosine(vecs[i], c1);
    if (s1 > s0 && !tied(s0, s1)) {
      label[i] = 1;
      members1.push_back(i);
      c1 = Eigen::VectorXd::Zero(c1.size());
      for (std::size_t m : members1) c1 += vecs[m];
      c1 /= static_cast<double>(members1.size());
    } else {
      members0.push_back(i);
      c0 = Eigen::VectorXd::Zero(c0.size());
      for (std::size_t m : members0) c0 += vecs[m];
      c0 /= static_cast<double>(members0.size());
    }
  }
  std::vector<double> score(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> sims(n);
    std::vector<bool> others(n, true);
    others[i] = false;
    for (std::size_t j = 0; j < n; ++j) sims[j] = cosine(vecs[i], vecs[j]);
    const std::size_t nearest = best_index(sims, others);
    for (std::size_t s = 0; s < n; ++s) {
      if (s != i && label[s] == label[nearest]) score[s] += 1.0;
    }
  }
  return score;
}

// --- Spearman --------------------------------------------------------------

// rank(x_i) = 1 + #{x_j < x_i} + (#{x_j == x_i} - 1) / 2
inline std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0.0, equal = 0.0;
    for (double y : x) {
      if (y < x[i]) less += 1.0;
      if (y == x[i]) equal += 1.0;
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

}  // namespace oracle
