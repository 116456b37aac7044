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

#include "audiosum/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "audiosum/random.hpp"

namespace audiosum {

namespace {

double squared_distance(const double* a, const double* b, Eigen::Index dim) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

Eigen::Index count_distinct_rows(const RowMatrix& x) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(x.rows()));
  std::iota(idx.begin(), idx.end(), 0);
  auto row_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (x(a, c) != x(b, c)) return x(a, c) < x(b, c);
    }
    return false;
  };
  std::sort(idx.begin(), idx.end(), row_less);
  Eigen::Index distinct = idx.empty() ? 0 : 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (row_less(idx[i - 1], idx[i])) ++distinct;
  }
  return distinct;
}

// Nearest centroid per row; returns the total squared distance.
double assign(const RowMatrix& x, const RowMatrix& centroids,
              std::vector<int>& labels, std::vector<double>& dist) {
  double inertia = 0.0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(x.row(r).data(), centroids.row(c).data(), x.cols());
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(r)] = best_c;
    dist[static_cast<std::size_t>(r)] = best;
    inertia += best;
  }
  return inertia;
}

RowMatrix kmeans_plus_plus(const RowMatrix& x, Eigen::Index k, RandomStream& rng) {
  const Eigen::Index n = x.rows();
  RowMatrix centroids(k, x.cols());
  centroids.row(0) = x.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n))));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) {
    d2[static_cast<std::size_t>(r)] = squared_distance(x.row(r).data(), centroids.row(0).data(), x.cols());
  }
  for (Eigen::Index c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) {
        acc += d2[static_cast<std::size_t>(r)];
        if (acc > u && d2[static_cast<std::size_t>(r)] > 0.0) {
          pick = r;
          break;
        }
      }
      // Round-off can leave u beyond the last positive weight.
      if (d2[static_cast<std::size_t>(pick)] == 0.0) {
        for (Eigen::Index r = n; r-- > 0;) {
          if (d2[static_cast<std::size_t>(r)] > 0.0) {
            pick = r;
            break;
          }
        }
      }
    }
    centroids.row(c) = x.row(pick);
    for (Eigen::Index r = 0; r < n; ++r) {
      d2[static_cast<std::size_t>(r)] =
          std::min(d2[static_cast<std::size_t>(r)],
                   squared_distance(x.row(r).data(), centroids.row(c).data(), x.cols()));
    }
  }
  return centroids;
}

RowMatrix standardized(const RowMatrix& x, const Eigen::RowVectorXd& offset,
                       const Eigen::RowVectorXd& scale) {
  RowMatrix out = x.rowwise() - offset;
  out.array().rowwise() /= scale.array();
  return out;
}

}  // namespace

Vocabulary build_vocabulary_k(const FeatureSequence& features, Eigen::Index k,
                              std::uint64_t seed, KMeansOptions options,
                              std::vector<double>* inertia_trace) {
  const RowMatrix& raw = features.vectors;
  const Eigen::Index n = raw.rows();
  if (n == 0) throw std::invalid_argument("build_vocabulary: no frames");
  if (k < 1 || k > n) {
    throw std::invalid_argument("build_vocabulary: k=" + std::to_string(k) +
                                " outside [1, " + std::to_string(n) + "]");
  }
  if (!raw.allFinite()) throw std::invalid_argument("build_vocabulary: non-finite features");

  Vocabulary vocab;
  RowMatrix x;
  if (options.standardize) {
    vocab.offset = raw.colwise().mean();
    RowMatrix centered = raw.rowwise() - vocab.offset;
    vocab.scale = (centered.array().square().colwise().sum() / static_cast<double>(n)).sqrt();
    for (Eigen::Index c = 0; c < vocab.scale.size(); ++c) {
      if (!(vocab.scale[c] > 0.0)) vocab.scale[c] = 1.0;
    }
    x = standardized(raw, vocab.offset, vocab.scale);
  } else {
    x = raw;
  }

  const Eigen::Index distinct = count_distinct_rows(x);
  if (k > distinct) {
    k = distinct;
    vocab.k_reduced = true;
  }

  RandomStream rng(seed);
  RowMatrix centroids = kmeans_plus_plus(x, k, rng);
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<int> previous;
  std::vector<double> dist(static_cast<std::size_t>(n));
  double inertia = 0.0;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    previous = labels;
    inertia = assign(x, centroids, labels, dist);
    if (inertia_trace) inertia_trace->push_back(inertia);
    if (labels == previous) break;

    RowMatrix sums = RowMatrix::Zero(k, x.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index r = 0; r < n; ++r) {
      sums.row(labels[static_cast<std::size_t>(r)]) += x.row(r);
      ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: take over the point farthest from its centroid.
      std::size_t far = 0;
      for (std::size_t r = 1; r < dist.size(); ++r) {
        if (dist[r] > dist[far]) far = r;
      }
      centroids.row(c) = x.row(static_cast<Eigen::Index>(far));
      dist[far] = 0.0;
    }
  }

  vocab.centroids = std::move(centroids);
  vocab.inertia = inertia;
  vocab.iterations = iter;
  return vocab;
}

Vocabulary build_vocabulary(const FeatureSequence& features, double ratio,
                            std::uint64_t seed, KMeansOptions options,
                            std::vector<double>* inertia_trace) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("build_vocabulary: ratio must be in (0, 1]");
  }
  const auto n = static_cast<double>(features.count());
  const auto k = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::lround(ratio * n)));
  return build_vocabulary_k(features, k, seed, options, inertia_trace);
}

std::vector<int> assign_terms(const FeatureSequence& features, const Vocabulary& vocab) {
  if (features.dim() != vocab.centroids.cols()) {
    throw std::invalid_argument("assign_terms: feature dim " + std::to_string(features.dim()) +
                                " != vocabulary dim " + std::to_string(vocab.centroids.cols()));
  }
  std::vector<int> labels(static_cast<std::size_t>(features.count()));
  std::vector<double> dist(labels.size());
  if (vocab.offset.size() > 0) {
    assign(standardized(features.vectors, vocab.offset, vocab.scale), vocab.centroids, labels, dist);
  } else {
    assign(features.vectors, vocab.centroids, labels, dist);
  }
  return labels;
}

Weighting parse_weighting(std::string_view name) {
  if (name == "dampened-tfidf" || name == "tfidf") return Weighting::kDampenedTfIdf;
  if (name == "binary") return Weighting::kBinary;
  throw std::invalid_argument("unknown weighting '" + std::string(name) + "'");
}

std::string_view weighting_name(Weighting w) {
  return w == Weighting::kBinary ? "binary" : "dampened-tfidf";
}

PhraseDocument build_phrases(const std::vector<int>& terms, int phrase_len, int k,
                             Weighting weighting) {
  if (terms.empty()) throw std::invalid_argument("build_phrases: no terms");
  if (phrase_len < 1) throw std::invalid_argument("build_phrases: phrase_len < 1");
  if (k < 1) throw std::invalid_argument("build_phrases: k < 1");
  for (int t : terms) {
    if (t < 0 || t >= k) throw std::invalid_argument("build_phrases: term outside [0, k)");
  }

  PhraseDocument doc;
  doc.terms = terms;
  doc.phrase_len = phrase_len;
  doc.k = k;
  doc.weighting = weighting;
  const std::size_t len = static_cast<std::size_t>(phrase_len);
  for (std::size_t first = 0; first < terms.size(); first += len) {
    doc.phrases.push_back({first, std::min(len, terms.size() - first)});
  }

  const auto n_phrases = static_cast<Eigen::Index>(doc.phrases.size());
  RowMatrix tf = RowMatrix::Zero(n_phrases, k);
  for (Eigen::Index p = 0; p < n_phrases; ++p) {
    const Phrase& ph = doc.phrases[static_cast<std::size_t>(p)];
    for (std::size_t i = ph.first_term; i < ph.first_term + ph.length; ++i) tf(p, terms[i]) += 1.0;
  }

  doc.vectors = RowMatrix::Zero(n_phrases, k);
  if (weighting == Weighting::kBinary) {
    doc.vectors = (tf.array() > 0.0).cast<double>();
    return doc;
  }
  const Eigen::RowVectorXd df = (tf.array() > 0.0).cast<double>().colwise().sum();
  for (Eigen::Index t = 0; t < k; ++t) {
    if (df[t] == 0.0) continue;
    const double idf = std::log(static_cast<double>(n_phrases) / df[t]);
    for (Eigen::Index p = 0; p < n_phrases; ++p) {
      if (tf(p, t) > 0.0) doc.vectors(p, t) = (1.0 + std::log(tf(p, t))) * idf;
    }
  }
  return doc;
}

double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: dimension mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

Eigen::MatrixXd cosine_matrix(const RowMatrix& vectors) {
  RowMatrix unit = vectors;
  for (Eigen::Index r = 0; r < unit.rows(); ++r) {
    const double norm = unit.row(r).norm();
    if (norm > 0.0) unit.row(r) /= norm;
  }
  Eigen::MatrixXd sim = unit * unit.transpose();
  return sim.cwiseMax(-1.0).cwiseMin(1.0);
}

}  // namespace audiosum
