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

#include "audiosum/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "audiosum/evaluation.hpp"
#include "audiosum/gaussian.hpp"
#include "audiosum/random.hpp"
#include "audiosum/summarizers.hpp"

namespace audiosum {

namespace fs = std::filesystem;

namespace {

std::string safe_name(std::string id) {
  for (char& c : id) {
    if (c == '/' || c == '\\' || c == ':') c = '_';
  }
  return id;
}

template <typename F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(1, n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

int exit_code_for(std::size_t failed, std::size_t total) {
  if (total == 0 || failed == total) return kExitTotalFailure;
  return failed == 0 ? kExitOk : kExitPartialFailure;
}

bool looks_like_wav(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in && std::string(magic, 4) == "RIFF";
}

int cmd_summarize(const fs::path& input, const SummaryConfig& config, const fs::path& out_dir,
                  unsigned jobs, std::ostream& log) {
  config.validate();
  const std::vector<ManifestEntry> entries =
      looks_like_wav(input) ? std::vector<ManifestEntry>{{input.stem().string(), input}}
                            : load_manifest(input);
  fs::create_directories(out_dir);
  const SummaryConfig r = config.resolved();
  const double frame = *r.frame_len_s;

  std::vector<std::string> errors(entries.size());
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    const ManifestEntry& e = entries[i];
    try {
      const AudioClip loaded = load_audio(e.path);
      bool all_silent = false;
      AudioClip clip = loaded;
      if (r.trim) {
        TrimResult t = trim_silence(loaded, r.trim_db);
        all_silent = t.all_silent;
        clip = std::move(t.clip);
      }
      SummaryConfig run = r;
      run.seed = song_seed(r.seed, e.id);
      const SummarySelection sel = summarize(clip, run);
      const AudioClip summary =
          synthesize_summary(clip, sel.frame_indices, frame_length_samples(frame, clip.sample_rate));

      const std::string name = safe_name(e.id);
      write_audio(summary, out_dir / (name + ".wav"));
      nlohmann::ordered_json j;
      j["id"] = e.id;
      j["song_seed"] = run.seed;
      j["trimmed_duration_s"] = clip.duration_s();
      j["all_silent"] = all_silent;
      j["selection"] = sel.to_json();
      write_file_atomic(out_dir / (name + ".selection.json"), j.dump(2) + "\n");
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });

  std::size_t failed = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (errors[i].empty()) {
      log << entries[i].id << ": ok\n";
    } else {
      ++failed;
      log << entries[i].id << ": error: " << errors[i] << "\n";
    }
  }
  return exit_code_for(failed, entries.size());
}

int cmd_evaluate(const fs::path& manifest, const fs::path& grid_file,
                 const std::vector<FeatureView>& views, const fs::path& out_dir, unsigned jobs,
                 std::ostream& log) {
  const std::vector<ManifestEntry> entries = load_manifest(manifest);
  const std::vector<SummaryConfig> setups = load_grid(grid_file);
  if (setups.empty()) throw ConfigError("grid defines no setups");

  EvalOptions options;
  options.jobs = jobs;
  options.dataset_id = manifest.stem().string();
  const EvalReport report = evaluate_grid(entries, setups, views, options);

  fs::create_directories(out_dir);
  write_file_atomic(out_dir / "report.tsv", report_table(report));
  write_file_atomic(out_dir / "report.json", report_json(report).dump(2) + "\n");

  nlohmann::ordered_json run;
  run["version"] = kToolkitVersion;
  run["rng"] = RandomStream::kAlgorithm;
  run["dataset_id"] = report.dataset_id;
  run["songs"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) run["songs"].push_back(e.id);
  run["views"] = nlohmann::ordered_json::array();
  for (FeatureView v : views) run["views"].push_back(view_name(v));
  run["setups"] = nlohmann::ordered_json::array();
  for (const auto& s : setups) run["setups"].push_back(s.resolved().to_json());
  write_file_atomic(out_dir / "run.json", run.dump(2) + "\n");

  std::size_t failed = 0, total = 0;
  for (const auto& row : report.rows) {
    for (const auto& s : row.songs) {
      ++total;
      if (!s.kl) {
        ++failed;
        log << row.descriptor << " [" << view_name(row.view) << "] " << s.id << ": error: " << s.error << "\n";
      }
    }
  }
  log << report.rows.size() << " rows, " << failed << " of " << total << " song evaluations failed\n";
  return exit_code_for(failed, total);
}

int cmd_features(const fs::path& audio, FeatureView view, double frame_len_s, const fs::path& out,
                 std::ostream& log) {
  const AudioClip clip = load_audio(audio);
  const FeatureSequence seq = extract_view(clip, view, frame_len_s);
  write_feature_cache(seq, out);
  log << view_name(view) << ": " << seq.count() << " x " << seq.dim() << "\n";
  return kExitOk;
}

int cmd_kl(const fs::path& original, const fs::path& summary, bool trim, std::ostream& out) {
  AudioClip a = load_audio(original);
  AudioClip b = load_audio(summary);
  if (trim) {
    a = trim_silence(a).clip;
    b = trim_silence(b).clip;
  }
  for (FeatureView v : {FeatureView::kRaw, FeatureView::kLogMel}) {
    const Sgm p = estimate_sgm(extract_view(a, v, 0.05));
    const Sgm q = estimate_sgm(extract_view(b, v, 0.05));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", kl_divergence(p, q));
    out << view_name(v) << "\t" << buf << "\n";
  }
  return kExitOk;
}

}  // namespace audiosum
