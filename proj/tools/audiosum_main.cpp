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

// audiosum command-line front end.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "audiosum/commands.hpp"
#include "audiosum/evaluation.hpp"

namespace {

using namespace audiosum;

FeatureView view_or_usage(const std::string& name) {
  try {
    return parse_view(name);
  } catch (const FeatureError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<FeatureView> parse_views(const std::string& list) {
  std::vector<FeatureView> views;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string item = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) views.push_back(view_or_usage(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (views.empty()) throw ConfigError("no views given");
  return views;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Machine-oriented music summarization toolkit"};
  app.require_subcommand(1);
  unsigned jobs = 1;

  // summarize
  auto* sum = app.add_subcommand("summarize", "Summarize a WAV file or every song of a manifest");
  std::string sum_input, sum_out;
  std::map<std::string, std::string> kv;
  auto opt = [&](const char* flag, const char* key, const char* help) {
    sum->add_option_function<std::string>(flag, [&kv, key](const std::string& v) { kv[key] = v; }, help);
  };
  sum->add_option("input", sum_input, "WAV file or manifest")->required();
  sum->add_option("--out", sum_out, "Output directory")->required();
  opt("--method", "method", "Summarizer (required)");
  opt("--duration", "duration", "Summary duration in seconds");
  opt("--frame", "frame", "Frame length in seconds");
  opt("--vocab-ratio", "vocab_ratio", "Vocabulary size as a fraction of frames");
  opt("--phrase-len", "phrase_len", "Terms per phrase");
  opt("--weighting", "weighting", "tfidf or binary");
  opt("--lambda", "lambda", "GRASSHOPPER / MMR trade-off");
  opt("--damping", "damping", "LexRank damping");
  opt("--threshold", "threshold", "LexRank edge threshold");
  opt("--lexrank-weighted", "lexrank_weighted", "true or false");
  opt("--mean-shift", "mean_shift", "true or false");
  opt("--standardize", "standardize", "Z-score features before k-means");
  opt("--trim", "trim", "Trim leading/trailing silence (true or false)");
  opt("--trim-db", "trim_db", "Silence threshold in dBFS");
  opt("--seed", "seed", "Random seed");
  sum->add_option("--jobs", jobs, "Worker threads");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Run a setup grid over a manifest");
  std::string ev_manifest, ev_grid, ev_out, ev_views = "raw,logmel";
  ev->add_option("--manifest", ev_manifest, "Song manifest (id, path)")->required();
  ev->add_option("--grid", ev_grid, "Setup grid file")->required();
  ev->add_option("--out", ev_out, "Run directory")->required();
  ev->add_option("--view,--views", ev_views, "Comma-separated views (raw, logmel, mfcc)");
  ev->add_option("--jobs", jobs, "Worker threads");

  // features
  auto* fe = app.add_subcommand("features", "Extract a feature view into a cache file");
  std::string fe_input, fe_out, fe_view = "mfcc";
  double fe_frame = 0.05;
  fe->add_option("input", fe_input, "WAV file")->required();
  fe->add_option("--out", fe_out, "Cache file")->required();
  fe->add_option("--view", fe_view, "raw, logmel or mfcc");
  fe->add_option("--frame", fe_frame, "Frame length in seconds");

  // kl
  auto* kl = app.add_subcommand("kl", "KL divergence between a song and its summary");
  std::string kl_a, kl_b;
  bool kl_trim = false;
  kl->add_option("original", kl_a, "Original WAV")->required();
  kl->add_option("summary", kl_b, "Summary WAV")->required();
  kl->add_flag("--trim", kl_trim, "Trim silence from both first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sum) {
      return cmd_summarize(sum_input, config_from_pairs(kv), sum_out, jobs, std::cerr);
    }
    if (*ev) {
      return cmd_evaluate(ev_manifest, ev_grid, parse_views(ev_views), ev_out, jobs, std::cerr);
    }
    if (*fe) {
      return cmd_features(fe_input, view_or_usage(fe_view), fe_frame, fe_out, std::cerr);
    }
    if (*kl) {
      return cmd_kl(kl_a, kl_b, kl_trim, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTotalFailure;
  }
  return kExitUsage;
}
