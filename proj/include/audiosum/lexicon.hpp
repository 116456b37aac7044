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

// Discretization of continuous feature frames into "terms" (vector-quantizer
// codewords) and "phrases" (fixed-length runs of terms), plus the weighted
// phrase vectors consumed by the phrase-ranking summarizers.

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "audiosum/features.hpp"

namespace audiosum {

struct Vocabulary {
  RowMatrix centroids;  // k rows, in the (possibly standardized) space
  // Per-dimension standardization applied before distance computations;
  // empty when clustering ran on the raw features.
  Eigen::RowVectorXd offset;
  Eigen::RowVectorXd scale;
  double inertia = 0.0;
  int iterations = 0;
  bool k_reduced = false;  // requested k exceeded the distinct frame count

  Eigen::Index k() const { return centroids.rows(); }
};

struct KMeansOptions {
  int max_iterations = 100;
  bool standardize = false;  // per-dimension z-scoring before clustering
};

/// k = max(1, round(ratio * frames)). k-means++ seeding from `seed`, Lloyd
/// iterations to an assignment fixpoint. Empty clusters are re-seeded with
/// the point farthest from its centroid.
Vocabulary build_vocabulary(const FeatureSequence& features, double ratio,
                            std::uint64_t seed, KMeansOptions options = {},
                            std::vector<double>* inertia_trace = nullptr);

/// Same, with an explicit k.
Vocabulary build_vocabulary_k(const FeatureSequence& features, Eigen::Index k,
                              std::uint64_t seed, KMeansOptions options = {},
                              std::vector<double>* inertia_trace = nullptr);

/// Nearest centroid (Euclidean) per frame, lowest index on ties.
std::vector<int> assign_terms(const FeatureSequence& features,
                              const Vocabulary& vocab);

enum class Weighting { kDampenedTfIdf, kBinary };

Weighting parse_weighting(std::string_view name);
std::string_view weighting_name(Weighting w);

struct Phrase {
  std::size_t first_term;
  std::size_t length;
};

struct PhraseDocument {
  std::vector<int> terms;
  int phrase_len = 10;
  int k = 0;
  Weighting weighting = Weighting::kDampenedTfIdf;
  std::vector<Phrase> phrases;
  RowMatrix vectors;  // one k-dim row per phrase

  std::size_t phrase_count() const { return phrases.size(); }
};

/// Consecutive non-overlapping phrases of `phrase_len` terms (the last may
/// be shorter). Dampened tf-idf: (1 + ln tf) * ln(N / df); binary: tf > 0.
PhraseDocument build_phrases(const std::vector<int>& terms, int phrase_len,
                             int k, Weighting weighting);

/// Cosine similarity; 0 when either vector has zero norm.
double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b);

/// Pairwise cosine similarities between the rows of `vectors`.
Eigen::MatrixXd cosine_matrix(const RowMatrix& vectors);

}  // namespace audiosum
