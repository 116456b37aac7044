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
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "audiosum/lexicon.hpp"

namespace audiosum {

enum class Method {
  kGaussianSampler,
  kGrasshopper,
  kLexRank,
  kLsa,
  kMmr,
  kSupportSets,
  kAvs,
  kBeginning,
  kMiddle,
  kEnd,
};

Method parse_method(std::string_view name);
std::string_view method_name(Method m);
bool is_phrase_method(Method m);
bool is_fixed_segment(Method m);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Everything needed to reproduce one summarization run. Unset optional
/// fields take method-specific defaults in resolved().
struct SummaryConfig {
  Method method = Method::kGaussianSampler;
  double duration_s = 30.0;
  std::optional<double> frame_len_s;
  double vocab_ratio = 0.1;
  int phrase_len = 10;
  std::optional<Weighting> weighting;
  std::optional<double> lambda;
  double damping = 0.85;
  double threshold = 0.1;
  bool lexrank_weighted = true;
  bool mean_shift = true;
  bool standardize = false;
  bool trim = true;
  double trim_db = -60.0;
  std::uint64_t seed = 0;

  /// Copy with every default materialized: frame size, weighting (LSA is
  /// always binary), and lambda.
  SummaryConfig resolved() const;

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  double frame() const { return resolved().frame_len_s.value(); }

  /// Canonical "key=value ..." string of the parameters that influence the
  /// selection. The seed appears only for randomized methods and only when
  /// nonzero.
  std::string descriptor() const;

  /// Same parameters with duration removed; groups a grid row with its
  /// siblings at other summary durations.
  std::string descriptor_without_duration() const;

  nlohmann::ordered_json to_json() const;
};

/// Builds a config from "key=value" pairs (keys as in the grid format:
/// method, duration, frame, vocab_ratio, phrase_len, weighting, lambda,
/// damping, threshold, lexrank_weighted, mean_shift, standardize, trim,
/// trim_db, seed). Unknown keys and bad values throw ConfigError.
SummaryConfig config_from_pairs(const std::map<std::string, std::string>& kv);

/// Grid document: one setup per line as whitespace-separated key=value
/// tokens; a comma-separated value list expands into the cartesian product.
/// '#' starts a comment. Every line is validated before any is returned;
/// errors carry the line number.
std::vector<SummaryConfig> parse_grid(std::string_view text);
std::vector<SummaryConfig> load_grid(const std::filesystem::path& path);

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;
};

/// Delimited text, columns `id, path` (comma or tab), '#' comments.
/// Relative paths resolve against the manifest's directory.
std::vector<ManifestEntry> parse_manifest(std::string_view text,
                                          const std::filesystem::path& base);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

}  // namespace audiosum
