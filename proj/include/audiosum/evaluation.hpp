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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "audiosum/audio_io.hpp"
#include "audiosum/config.hpp"
#include "audiosum/features.hpp"
#include "audiosum/summarizers.hpp"

namespace audiosum {

inline constexpr std::string_view kToolkitVersion = "1.0.0";

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SongOutcome {
  std::string id;
  std::optional<double> kl;  // empty on failure
  std::string error;
};

struct EvalRow {
  SummaryConfig setup;
  std::string descriptor;
  FeatureView view = FeatureView::kRaw;
  std::vector<SongOutcome> songs;
  double mean_kl = 0.0;
  std::size_t failures = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::string dataset_id;
  std::uint64_t seed = 0;
  std::string version{kToolkitVersion};

  /// Rows of a single view, in the original order.
  EvalReport for_view(FeatureView view) const;
};

using AudioLoader = std::function<AudioClip(const ManifestEntry&)>;

struct EvalOptions {
  unsigned jobs = 1;
  std::string dataset_id = "dataset";
  std::uint64_t seed = 0;
  AudioLoader loader;  // defaults to load_audio(entry.path)
};

/// Per-song seed: depends on the setup seed and the song id only, never on
/// scheduling.
std::uint64_t song_seed(std::uint64_t setup_seed, const std::string& song_id);

/// The reference version of a song for a setup: the (optionally trimmed)
/// clip cut to whole summarization frames.
AudioClip framed_reference(const AudioClip& trimmed, double frame_len_s);

/// KL(original || summary) in each requested view for one already-loaded
/// (untrimmed) song.
std::map<FeatureView, double> evaluate_song(const AudioClip& clip,
                                            const SummaryConfig& setup,
                                            std::span<const FeatureView> views,
                                            const std::string& song_id);

/// One report row per setup x view. Each song is loaded once; songs run on
/// up to `jobs` workers; per-song failures are recorded, not fatal. Rows
/// where every song failed carry a NaN mean. Duplicate setups are rejected.
EvalReport evaluate_grid(const std::vector<ManifestEntry>& manifest,
                         const std::vector<SummaryConfig>& setups,
                         std::span<const FeatureView> views,
                         const EvalOptions& options = {});

/// Single setup and view; throws when every song fails.
EvalRow evaluate_setup(const std::vector<ManifestEntry>& manifest,
                       const SummaryConfig& setup, FeatureView view,
                       const EvalOptions& options = {});

/// Pearson correlation of average ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

struct CorrelationSummary {
  double rho = 0.0;
  struct Pair {
    std::string descriptor;
    double a = 0.0;
    double b = 0.0;
  };
  std::vector<Pair> table;
};

/// Aligns rows by setup descriptor (each report must hold one view) and
/// correlates their mean KLs.
CorrelationSummary compare_setups(const EvalReport& a, const EvalReport& b);

struct BestSetup {
  std::string method;
  FeatureView view;
  std::string descriptor;  // without duration
  double average_kl = 0.0;
};

/// Per method and view, the parameter combination with the lowest mean KL
/// averaged over summary durations (first in grid order on ties).
std::vector<BestSetup> best_on_average(const EvalReport& report);

std::string report_table(const EvalReport& report);
nlohmann::ordered_json report_json(const EvalReport& report);

}  // namespace audiosum
