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

#include "audiosum/summarizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "audiosum/gaussian.hpp"
#include "audiosum/random.hpp"

namespace audiosum {

nlohmann::ordered_json SummarySelection::to_json() const {
  nlohmann::ordered_json j;
  j["method"] = method;
  j["frame_len_s"] = frame_len_s;
  j["total_frames"] = total_frames;
  j["selected_frames"] = frame_indices.size();
  j["duration_s"] = duration_s();
  j["params"] = params;
  j["frame_indices"] = frame_indices;
  return j;
}

bool scores_tied(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  // Near-equal runs are ties: lowest index first.
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && scores_tied(scores[order[i]], scores[order[j]])) ++j;
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(i),
              order.begin() + static_cast<std::ptrdiff_t>(j));
    i = j;
  }
  return order;
}

std::size_t argmax_lowest(std::span<const double> scores, const std::vector<bool>& admissible) {
  auto ok = [&](std::size_t i) { return admissible.empty() || admissible[i]; };
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (ok(i) && (!any || scores[i] > best)) {
      best = scores[i];
      any = true;
    }
  }
  if (!any) throw SummarizerError("argmax over an empty set");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (ok(i) && scores_tied(scores[i], best)) return i;
  }
  return 0;  // unreachable
}

// ---------------------------------------------------------------------------

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P, double tolerance,
                                        long max_iterations) {
  const Eigen::Index n = P.rows();
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd Pt = P.transpose();
  for (long it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd next = Pt * pi;
    next /= next.sum();
    const double delta = (next - pi).cwiseAbs().maxCoeff();
    pi = std::move(next);
    if (delta < tolerance) return pi;
  }
  throw SummarizerError("stationary distribution did not converge (periodic or degenerate chain)");
}

RankResult grasshopper_rank(const Eigen::MatrixXd& W, const Eigen::VectorXd& prior,
                            GrasshopperOptions options, std::optional<std::size_t> k) {
  const Eigen::Index n = W.rows();
  if (n < 1 || W.cols() != n) throw SummarizerError("grasshopper: W must be square and non-empty");
  if (!W.allFinite() || (W.array() < 0.0).any()) {
    throw SummarizerError("grasshopper: W must be finite and non-negative");
  }
  const Eigen::VectorXd row_sums = W.rowwise().sum();
  if ((row_sums.array() <= 0.0).any()) throw SummarizerError("grasshopper: W has a zero row");
  if (prior.size() != n || (prior.array() < 0.0).any() || std::abs(prior.sum() - 1.0) > 1e-9) {
    throw SummarizerError("grasshopper: prior must be a distribution over the n items");
  }
  const double lambda = options.lambda;
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw SummarizerError("grasshopper: lambda outside [0, 1]");
  const std::size_t count = k.value_or(static_cast<std::size_t>(n));
  if (count < 1 || count > static_cast<std::size_t>(n)) throw SummarizerError("grasshopper: k outside [1, n]");

  const Eigen::MatrixXd O = W.array().colwise() / row_sums.array();
  const Eigen::MatrixXd P =
      lambda * O + (1.0 - lambda) * Eigen::VectorXd::Ones(n) * prior.transpose();

  RankResult result;
  result.scores.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<bool> ranked(static_cast<std::size_t>(n), false);

  const Eigen::VectorXd pi =
      stationary_distribution(P, options.stationary_tolerance, options.max_iterations);
  const std::size_t first = argmax_lowest(std::span<const double>(pi.data(), pi.size()));
  result.order.push_back(first);
  result.scores[first] = pi[static_cast<Eigen::Index>(first)];
  ranked[first] = true;

  while (result.order.size() < count) {
    std::vector<Eigen::Index> unranked;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!ranked[static_cast<std::size_t>(i)]) unranked.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(unranked.size());
    Eigen::MatrixXd I_minus_Q(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) {
        I_minus_Q(a, b) = (a == b ? 1.0 : 0.0) - P(unranked[a], unranked[b]);
      }
    }
    // v = N^T 1 / (n - |G|) with N = (I - Q)^{-1}.
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(I_minus_Q.transpose());
    if (!(lu.rcond() > 1e-13)) {
      throw SummarizerError("grasshopper: I - Q is singular (disconnected chain)");
    }
    const Eigen::VectorXd visits = lu.solve(Eigen::VectorXd::Ones(m)) / static_cast<double>(m);
    const std::size_t best = argmax_lowest(std::span<const double>(visits.data(), visits.size()));
    const auto item = static_cast<std::size_t>(unranked[static_cast<Eigen::Index>(best)]);
    result.order.push_back(item);
    result.scores[item] = visits[static_cast<Eigen::Index>(best)];
    ranked[item] = true;
  }
  return result;
}

// ---------------------------------------------------------------------------

RankResult lexrank_rank(const Eigen::MatrixXd& sim, LexRankOptions options) {
  const Eigen::Index n = sim.rows();
  if (n < 1 || sim.cols() != n) throw SummarizerError("lexrank: similarity matrix must be square");
  if (!sim.allFinite()) throw SummarizerError("lexrank: non-finite similarity");
  if ((sim - sim.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw SummarizerError("lexrank: similarity matrix is not symmetric");
  }
  if (!(options.damping > 0.0 && options.damping < 1.0)) {
    throw SummarizerError("lexrank: damping outside (0, 1)");
  }

  // M(i, j): share of j's score that j passes to i.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double mass = 0.0;
    int degree = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != j && sim(j, k) > options.threshold) {
        mass += sim(j, k);
        ++degree;
      }
    }
    if (degree == 0) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j && sim(i, j) > options.threshold) {
        M(i, j) = options.weighted ? sim(i, j) / mass : 1.0 / degree;
      }
    }
  }

  const double base = (1.0 - options.damping) / static_cast<double>(n);
  Eigen::VectorXd scores = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (long it = 0; it < options.max_iterations; ++it) {
    Eigen::VectorXd next = (options.damping * (M * scores)).array() + base;
    const double delta = (next - scores).cwiseAbs().maxCoeff();
    scores = std::move(next);
    if (delta < options.tolerance) break;
  }

  RankResult result;
  result.scores.assign(scores.data(), scores.data() + n);
  result.order = order_by_score(result.scores);
  return result;
}

// ---------------------------------------------------------------------------

int lsa_topic_count(const Eigen::VectorXd& singular_values) {
  if (singular_values.size() == 0 || !(singular_values[0] > 0.0)) return 0;
  const double half = singular_values[0] / 2.0;
  int k = 0;
  while (k < singular_values.size() && singular_values[k] >= half) ++k;
  return k;
}

RankResult lsa_rank(const Eigen::MatrixXd& A) {
  if (A.size() == 0) throw SummarizerError("lsa: empty matrix");
  if (!A.allFinite() || (A.array() < 0.0).any()) throw SummarizerError("lsa: A must be finite and non-negative");
  if ((A.array() == 0.0).all()) throw SummarizerError("lsa: all-zero term-phrase matrix");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const int topics = lsa_topic_count(sigma);
  const Eigen::MatrixXd& V = svd.matrixV();

  RankResult result;
  result.scores.resize(static_cast<std::size_t>(A.cols()));
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    double acc = 0.0;
    for (int i = 0; i < topics; ++i) acc += V(j, i) * V(j, i) * sigma[i] * sigma[i];
    result.scores[static_cast<std::size_t>(j)] = std::sqrt(acc);
  }
  result.order = order_by_score(result.scores);
  return result;
}

// ---------------------------------------------------------------------------

RankResult mmr_rank(const RowMatrix& vectors, double lambda, std::optional<std::size_t> k) {
  const auto n = static_cast<std::size_t>(vectors.rows());
  if (n < 1) throw SummarizerError("mmr: no phrases");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw SummarizerError("mmr: lambda outside [0, 1]");
  const std::size_t count = k.value_or(n);
  if (count < 1 || count > n) throw SummarizerError("mmr: k outside [1, n]");

  const Eigen::VectorXd query = vectors.colwise().mean().transpose();
  std::vector<double> relevance(n);
  for (std::size_t i = 0; i < n; ++i) {
    relevance[i] = cosine_similarity(vectors.row(static_cast<Eigen::Index>(i)).transpose(), query);
  }
  const Eigen::MatrixXd sim = cosine_matrix(vectors);

  RankResult result;
  result.scores.assign(n, 0.0);
  std::vector<bool> open(n, true);
  std::vector<double> redundancy(n, -std::numeric_limits<double>::infinity());
  std::vector<double> value(n);
  while (result.order.size() < count) {
    const bool first = result.order.empty();
    for (std::size_t i = 0; i < n; ++i) {
      value[i] = lambda * relevance[i] - (1.0 - lambda) * (first ? 0.0 : redundancy[i]);
    }
    const std::size_t pick = argmax_lowest(value, open);
    result.order.push_back(pick);
    result.scores[pick] = value[pick];
    open[pick] = false;
    for (std::size_t i = 0; i < n; ++i) {
      redundancy[i] = std::max(redundancy[i], sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(pick)));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

std::vector<int> passage_order_clusters(const RowMatrix& vectors) {
  const Eigen::Index n = vectors.rows();
  if (n < 2) throw SummarizerError("support sets: need at least two phrases");
  std::vector<int> label(static_cast<std::size_t>(n));
  Eigen::VectorXd centroid[2] = {vectors.row(0).transpose(), vectors.row(1).transpose()};
  double members[2] = {1.0, 1.0};
  label[0] = 0;
  label[1] = 1;
  for (Eigen::Index i = 2; i < n; ++i) {
    const Eigen::VectorXd v = vectors.row(i).transpose();
    const double s0 = cosine_similarity(v, centroid[0]);
    const double s1 = cosine_similarity(v, centroid[1]);
    const int c = (s1 > s0 && !scores_tied(s0, s1)) ? 1 : 0;
    label[static_cast<std::size_t>(i)] = c;
    members[c] += 1.0;
    centroid[c] += (v - centroid[c]) / members[c];
  }
  return label;
}

std::vector<std::vector<std::size_t>> support_sets(const RowMatrix& vectors) {
  const auto n = static_cast<std::size_t>(vectors.rows());
  const std::vector<int> label = passage_order_clusters(vectors);
  const Eigen::MatrixXd sim = cosine_matrix(vectors);
  std::vector<std::vector<std::size_t>> sets(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> others(n, true);
    others[i] = false;
    for (std::size_t j = 0; j < n; ++j) row[j] = sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    const std::size_t nearest = argmax_lowest(row, others);
    for (std::size_t s = 0; s < n; ++s) {
      if (s != i && label[s] == label[nearest]) sets[i].push_back(s);
    }
  }
  return sets;
}

RankResult support_sets_rank(const RowMatrix& vectors) {
  const auto sets = support_sets(vectors);
  RankResult result;
  result.scores.assign(sets.size(), 0.0);
  for (const auto& set : sets) {
    for (std::size_t s : set) result.scores[s] += 1.0;
  }
  result.order = order_by_score(result.scores);
  return result;
}

// ---------------------------------------------------------------------------

std::size_t frames_for_duration(double duration_s, double frame_len_s) {
  if (!(duration_s > 0.0) || !(frame_len_s > 0.0)) {
    throw SummarizerError("duration and frame length must be positive");
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(duration_s / frame_len_s)));
}

namespace {

SummarySelection contiguous(std::size_t start, std::size_t width, std::size_t n_frames,
                            double frame_len_s, std::string method) {
  SummarySelection sel;
  sel.frame_indices.resize(width);
  std::iota(sel.frame_indices.begin(), sel.frame_indices.end(), start);
  sel.frame_len_s = frame_len_s;
  sel.total_frames = n_frames;
  sel.method = std::move(method);
  return sel;
}

}  // namespace

SummarySelection avs_select(const FeatureSequence& features, double duration_s) {
  const auto n = static_cast<std::size_t>(features.count());
  const std::size_t w = frames_for_duration(duration_s, features.frame_len_s);
  if (w > n) {
    throw SummarizerError("avs: window of " + std::to_string(w) + " frames exceeds the " +
                          std::to_string(n) + "-frame song");
  }
  RowMatrix unit = features.vectors;
  for (Eigen::Index r = 0; r < unit.rows(); ++r) {
    const double norm = unit.row(r).norm();
    if (norm > 0.0) unit.row(r) /= norm;
    else unit.row(r).setZero();
  }
  // Mean cosine of frame t to every frame = unit_t . mean(unit).
  const Eigen::VectorXd mean_unit = unit.colwise().mean().transpose();
  const Eigen::VectorXd affinity = unit * mean_unit;

  std::vector<double> window_score(n - w + 1);
  for (std::size_t s = 0; s < window_score.size(); ++s) {
    double acc = 0.0;
    for (std::size_t t = s; t < s + w; ++t) acc += affinity[static_cast<Eigen::Index>(t)];
    window_score[s] = acc / static_cast<double>(w);
  }
  const std::size_t best = argmax_lowest(window_score);
  return contiguous(best, w, n, features.frame_len_s, "avs");
}

SummarySelection fixed_segment(std::size_t n_frames, double duration_s, double frame_len_s,
                               SegmentPosition position) {
  const std::size_t w = frames_for_duration(duration_s, frame_len_s);
  if (w > n_frames) {
    throw SummarizerError("segment of " + std::to_string(w) + " frames exceeds the " +
                          std::to_string(n_frames) + "-frame song");
  }
  switch (position) {
    case SegmentPosition::kBeginning:
      return contiguous(0, w, n_frames, frame_len_s, "beginning");
    case SegmentPosition::kMiddle:
      return contiguous((n_frames - w) / 2, w, n_frames, frame_len_s, "middle");
    case SegmentPosition::kEnd:
      return contiguous(n_frames - w, w, n_frames, frame_len_s, "end");
  }
  throw SummarizerError("unknown segment position");
}

// ---------------------------------------------------------------------------

SummarySelection gaussian_sampler_select(const FeatureSequence& features, std::size_t n,
                                         bool mean_shift, std::uint64_t seed) {
  const auto pool_size = static_cast<std::size_t>(features.count());
  if (n < 1 || n > pool_size) {
    throw SummarizerError("gaussian sampler: cannot select " + std::to_string(n) + " of " +
                          std::to_string(pool_size) + " frames");
  }
  std::optional<Sgm> sgm;
  try {
    sgm = estimate_sgm(features);
  } catch (const GaussianError& e) {
    throw SummarizerError(std::string("gaussian sampler: degenerate song model: ") + e.what());
  }
  const RowMatrix whitened = sgm->whiten_rows(features.vectors);
  const Eigen::Index dim = features.dim();

  RandomStream rng(seed);
  std::vector<bool> taken(pool_size, false);
  Eigen::VectorXd diff = Eigen::VectorXd::Zero(dim);
  SummarySelection sel;
  sel.frame_indices.reserve(n);
  for (std::size_t picked = 0; picked < n; ++picked) {
    const Eigen::VectorXd target = sample(*sgm, rng) - diff;
    const Eigen::VectorXd target_w = sgm->whiten(target);
    std::size_t best = pool_size;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < pool_size; ++f) {
      if (taken[f]) continue;
      const double d = (whitened.row(static_cast<Eigen::Index>(f)).transpose() - target_w).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = f;
      }
    }
    taken[best] = true;
    sel.frame_indices.push_back(best);
    if (mean_shift) diff = target - features.vectors.row(static_cast<Eigen::Index>(best)).transpose();
  }
  std::sort(sel.frame_indices.begin(), sel.frame_indices.end());
  sel.frame_len_s = features.frame_len_s;
  sel.total_frames = pool_size;
  sel.method = "gaussian-sampler";
  return sel;
}

// ---------------------------------------------------------------------------

RankResult rank_phrases(const PhraseDocument& doc, const SummaryConfig& config) {
  const SummaryConfig r = config.resolved();
  const auto n = static_cast<Eigen::Index>(doc.phrase_count());
  if (n == 1) return {{0}, {1.0}};
  switch (r.method) {
    case Method::kGrasshopper: {
      Eigen::MatrixXd W = cosine_matrix(doc.vectors);
      W.diagonal().setOnes();
      GrasshopperOptions opts;
      opts.lambda = *r.lambda;
      return grasshopper_rank(W, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)), opts);
    }
    case Method::kLexRank: {
      LexRankOptions opts;
      opts.threshold = r.threshold;
      opts.damping = r.damping;
      opts.weighted = r.lexrank_weighted;
      return lexrank_rank(cosine_matrix(doc.vectors), opts);
    }
    case Method::kLsa:
      return lsa_rank(doc.vectors.transpose());
    case Method::kMmr:
      return mmr_rank(doc.vectors, *r.lambda);
    case Method::kSupportSets:
      return support_sets_rank(doc.vectors);
    default:
      throw SummarizerError("rank_phrases: not a phrase method");
  }
}

std::vector<std::size_t> take_phrases(const PhraseDocument& doc,
                                      std::span<const std::size_t> order,
                                      std::size_t target_frames) {
  std::vector<std::size_t> frames;
  for (std::size_t p : order) {
    if (frames.size() >= target_frames) break;
    const Phrase& ph = doc.phrases.at(p);
    for (std::size_t i = 0; i < ph.length; ++i) frames.push_back(ph.first_term + i);
  }
  if (frames.size() > target_frames) frames.resize(target_frames);  // trims the last phrase
  std::sort(frames.begin(), frames.end());
  return frames;
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw SummarizerError(std::string(name) + ": " + e.what());
  }
}

}  // namespace

SummarySelection summarize(const AudioClip& clip, const SummaryConfig& config) {
  stage("config", [&] { config.validate(); return 0; });
  const SummaryConfig r = config.resolved();
  const double frame = *r.frame_len_s;
  const std::size_t frame_samples = frame_length_samples(frame, clip.sample_rate);
  const std::size_t n_frames =
      stage("framing", [&] { return frame_signal(clip, frame).size(); });
  const std::size_t target = frames_for_duration(r.duration_s, frame);

  SummarySelection sel;
  nlohmann::ordered_json params = r.to_json();
  params["frame_samples"] = frame_samples;
  params["rng"] = RandomStream::kAlgorithm;

  if (target >= n_frames) {
    sel.frame_indices.resize(n_frames);
    std::iota(sel.frame_indices.begin(), sel.frame_indices.end(), 0);
    params["whole_song"] = true;
  } else if (is_fixed_segment(r.method)) {
    const SegmentPosition pos = r.method == Method::kBeginning ? SegmentPosition::kBeginning
                                : r.method == Method::kMiddle  ? SegmentPosition::kMiddle
                                                               : SegmentPosition::kEnd;
    sel = stage("selection", [&] { return fixed_segment(n_frames, r.duration_s, frame, pos); });
  } else {
    const FeatureSequence features = stage("features", [&] { return mfcc(clip, frame); });
    if (r.method == Method::kAvs) {
      sel = stage("selection", [&] { return avs_select(features, r.duration_s); });
    } else if (r.method == Method::kGaussianSampler) {
      sel = stage("selection", [&] {
        return gaussian_sampler_select(features, target, r.mean_shift, r.seed);
      });
    } else {
      const Vocabulary vocab = stage("lexicon", [&] {
        KMeansOptions opts;
        opts.standardize = r.standardize;
        return build_vocabulary(features, r.vocab_ratio, r.seed, opts);
      });
      const PhraseDocument doc = stage("lexicon", [&] {
        return build_phrases(assign_terms(features, vocab), r.phrase_len,
                             static_cast<int>(vocab.k()), *r.weighting);
      });
      const RankResult ranking = stage("ranking", [&] { return rank_phrases(doc, r); });
      sel.frame_indices = take_phrases(doc, ranking.order, target);
      params["vocabulary_size"] = vocab.k();
      params["vocabulary_reduced"] = vocab.k_reduced;
      params["phrases"] = doc.phrase_count();
      params["phrase_order"] = ranking.order;
    }
  }
  sel.frame_len_s = frame;
  sel.total_frames = n_frames;
  sel.method = std::string(method_name(r.method));
  sel.params = std::move(params);
  return sel;
}

}  // namespace audiosum
