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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "audiosum/audio_io.hpp"
#include "audiosum/config.hpp"
#include "audiosum/features.hpp"
#include "audiosum/lexicon.hpp"

namespace audiosum {

/// Frames chosen for a summary, strictly increasing.
struct SummarySelection {
  std::vector<std::size_t> frame_indices;
  double frame_len_s = 0.0;
  std::size_t total_frames = 0;
  std::string method;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();

  std::size_t size() const { return frame_indices.size(); }
  double duration_s() const { return size() * frame_len_s; }
  nlohmann::ordered_json to_json() const;
};

/// `order` lists items best first. `scores[i]` is item i's score where the
/// method defines one (empty otherwise).
struct RankResult {
  std::vector<std::size_t> order;
  std::vector<double> scores;
};

class SummarizerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scores closer than this (relative to max(1, |a|, |b|)) count as tied;
/// ties always go to the lowest index.
inline constexpr double kTieTolerance = 1e-9;

bool scores_tied(double a, double b);

/// Descending score, ascending index among tied scores.
std::vector<std::size_t> order_by_score(std::span<const double> scores);

/// Index of the largest admissible score, lowest index on ties. `admissible`
/// may be empty (all admissible).
std::size_t argmax_lowest(std::span<const double> scores,
                          const std::vector<bool>& admissible = {});

// ---------------------------------------------------------------------------
// GRASSHOPPER: random walk with absorbing states.

struct GrasshopperOptions {
  double lambda = 0.5;
  double stationary_tolerance = 1e-10;
  long max_iterations = 100000;
};

/// Stationary distribution pi = P^T pi of a row-stochastic matrix, by power
/// iteration from the uniform vector.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P,
                                        double tolerance, long max_iterations);

/// W: non-negative similarities with positive row sums. prior: distribution
/// over the n items. Ranks `k` items (all when unset). The first pick
/// maximizes the stationary probability of P = lambda*O + (1-lambda)*1 r^T;
/// each later pick maximizes expected visits with the ranked states made
/// absorbing. scores[i] is the quantity item i won with.
RankResult grasshopper_rank(const Eigen::MatrixXd& W,
                            const Eigen::VectorXd& prior,
                            GrasshopperOptions options = {},
                            std::optional<std::size_t> k = std::nullopt);

// ---------------------------------------------------------------------------
// LexRank.

struct LexRankOptions {
  double threshold = 0.1;
  double damping = 0.85;
  bool weighted = true;
  double tolerance = 1e-8;
  long max_iterations = 10000;
};

/// Power iteration over the thresholded similarity graph. Weighted edges
/// share a vertex's score in proportion to similarity; unweighted edges
/// share it equally by degree.
RankResult lexrank_rank(const Eigen::MatrixXd& sim, LexRankOptions options = {});

// ---------------------------------------------------------------------------
// LSA.

/// Number of leading singular values not below half of the largest.
int lsa_topic_count(const Eigen::VectorXd& singular_values);

/// A: terms x phrases. score(j) = sqrt(sum_{i<=K} v_ij^2 sigma_i^2).
RankResult lsa_rank(const Eigen::MatrixXd& A);

// ---------------------------------------------------------------------------
// MMR with the phrase centroid as the query.

/// Greedy lambda*cos(s, Q) - (1-lambda)*max_selected cos(s, s_j); the
/// penalty is 0 while nothing is selected. scores[i] is the MMR value at the
/// time item i was selected.
RankResult mmr_rank(const RowMatrix& vectors, double lambda,
                    std::optional<std::size_t> k = std::nullopt);

// ---------------------------------------------------------------------------
// Support sets with the passage-order two-cluster heuristic.

/// Two clusters seeded with phrases 0 and 1; the rest join the cluster with
/// the more similar (cosine) running centroid, in passage order, ties to the
/// first cluster. Returns the cluster id of every phrase.
std::vector<int> passage_order_clusters(const RowMatrix& vectors);

/// S_i: members (other than i) of the cluster holding the phrase most
/// similar to phrase i.
std::vector<std::vector<std::size_t>> support_sets(const RowMatrix& vectors);

/// score(s) = number of support sets containing s.
RankResult support_sets_rank(const RowMatrix& vectors);

// ---------------------------------------------------------------------------
// Continuous baselines.

enum class SegmentPosition { kBeginning, kMiddle, kEnd };

/// round(duration / frame), never below one frame.
std::size_t frames_for_duration(double duration_s, double frame_len_s);

/// Contiguous window with the highest mean cosine similarity to all frames.
SummarySelection avs_select(const FeatureSequence& features, double duration_s);

SummarySelection fixed_segment(std::size_t n_frames, double duration_s,
                               double frame_len_s, SegmentPosition position);

// ---------------------------------------------------------------------------
// Gaussian sampler.

/// Repeatedly draws from the song's Gaussian, shifts the draw by the running
/// difference vector (when mean_shift is set), and takes the unselected frame
/// nearest in Mahalanobis distance.
SummarySelection gaussian_sampler_select(const FeatureSequence& features,
                                         std::size_t n, bool mean_shift,
                                         std::uint64_t seed);

// ---------------------------------------------------------------------------

/// Ranks phrases of `doc` with a phrase method from `config`.
RankResult rank_phrases(const PhraseDocument& doc, const SummaryConfig& config);

/// Takes whole phrases in rank order until `target_frames` is reached, then
/// trims the tail of the last phrase taken. Returns sorted frame indices.
std::vector<std::size_t> take_phrases(const PhraseDocument& doc,
                                      std::span<const std::size_t> order,
                                      std::size_t target_frames);

/// Full pipeline: features, (lexicon, ranking), selection.
SummarySelection summarize(const AudioClip& clip, const SummaryConfig& config);

}  // namespace audiosum
