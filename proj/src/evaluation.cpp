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

#include "audiosum/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "audiosum/gaussian.hpp"
#include "audiosum/random.hpp"

namespace audiosum {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

FeatureSequence view_features(const AudioClip& clip, FeatureView view) {
  switch (view) {
    case FeatureView::kRaw:
      return raw_sample_stream(clip);
    case FeatureView::kLogMel:
      return log_mel(clip, 0.05);
    case FeatureView::kMfcc:
      return mfcc(clip, 0.05);
  }
  throw EvaluationError("unknown view");
}

// Per-song state shared by every setup: trimmed/framed references and their
// models are computed once per distinct (trim, frame) combination.
class SongContext {
 public:
  explicit SongContext(const AudioClip& clip) : clip_(clip) {}

  std::map<FeatureView, double> evaluate(const SummaryConfig& setup,
                                         std::span<const FeatureView> views,
                                         const std::string& song_id) {
    const SummaryConfig r = setup.resolved();
    const double frame = *r.frame_len_s;
    Reference& ref = reference(r.trim, r.trim_db, frame);

    SummaryConfig run = r;
    run.seed = song_seed(setup.seed, song_id);
    const SummarySelection sel = summarize(ref.clip, run);
    const AudioClip summary = synthesize_summary(
        ref.clip, sel.frame_indices, frame_length_samples(frame, ref.clip.sample_rate));

    std::map<FeatureView, double> out;
    for (FeatureView view : views) {
      auto it = ref.models.find(view);
      if (it == ref.models.end()) {
        it = ref.models.emplace(view, estimate_sgm(view_features(ref.clip, view))).first;
      }
      const Sgm q = estimate_sgm(view_features(summary, view));
      out[view] = kl_divergence(it->second, q);
    }
    return out;
  }

 private:
  struct Reference {
    AudioClip clip;
    std::map<FeatureView, Sgm> models;
  };

  Reference& reference(bool trim, double trim_db, double frame) {
    char key[96];
    std::snprintf(key, sizeof key, "%d/%.17g/%.17g", trim ? 1 : 0, trim ? trim_db : 0.0, frame);
    auto it = refs_.find(key);
    if (it == refs_.end()) {
      AudioClip base = trim ? trim_silence(clip_, trim_db).clip : clip_;
      it = refs_.emplace(key, Reference{framed_reference(base, frame), {}}).first;
    }
    return it->second;
  }

  const AudioClip& clip_;
  std::map<std::string, Reference> refs_;
};

AudioClip default_loader(const ManifestEntry& entry) { return load_audio(entry.path); }

}  // namespace

EvalReport EvalReport::for_view(FeatureView view) const {
  EvalReport out;
  out.dataset_id = dataset_id;
  out.seed = seed;
  out.version = version;
  for (const auto& row : rows) {
    if (row.view == view) out.rows.push_back(row);
  }
  return out;
}

std::uint64_t song_seed(std::uint64_t setup_seed, const std::string& song_id) {
  return derive_seed(setup_seed, song_id);
}

AudioClip framed_reference(const AudioClip& trimmed, double frame_len_s) {
  const std::size_t len = frame_length_samples(frame_len_s, trimmed.sample_rate);
  const std::size_t n_frames = trimmed.samples.size() / len;
  if (n_frames == 0) throw EvaluationError("song is shorter than one summarization frame");
  AudioClip out;
  out.sample_rate = trimmed.sample_rate;
  out.samples.assign(trimmed.samples.begin(),
                     trimmed.samples.begin() + static_cast<std::ptrdiff_t>(n_frames * len));
  return out;
}

std::map<FeatureView, double> evaluate_song(const AudioClip& clip, const SummaryConfig& setup,
                                            std::span<const FeatureView> views,
                                            const std::string& song_id) {
  setup.validate();
  SongContext ctx(clip);
  return ctx.evaluate(setup, views, song_id);
}

EvalReport evaluate_grid(const std::vector<ManifestEntry>& manifest,
                         const std::vector<SummaryConfig>& setups,
                         std::span<const FeatureView> views, const EvalOptions& options) {
  if (manifest.empty()) throw EvaluationError("empty manifest");
  if (views.empty()) throw EvaluationError("no evaluation views requested");
  std::set<std::string> seen;
  for (const auto& s : setups) {
    s.validate();
    if (!seen.insert(s.descriptor()).second) throw ConfigError("duplicate setup: " + s.descriptor());
  }
  const AudioLoader loader = options.loader ? options.loader : AudioLoader(default_loader);

  const std::size_t n_songs = manifest.size();
  const std::size_t n_views = views.size();
  // outcomes[(setup * n_views + view) * n_songs + song]
  std::vector<SongOutcome> outcomes(setups.size() * n_views * n_songs);

  auto run_song = [&](std::size_t song) {
    const ManifestEntry& entry = manifest[song];
    auto slot = [&](std::size_t s, std::size_t v) -> SongOutcome& {
      return outcomes[(s * n_views + v) * n_songs + song];
    };
    for (std::size_t s = 0; s < setups.size(); ++s) {
      for (std::size_t v = 0; v < n_views; ++v) slot(s, v).id = entry.id;
    }
    AudioClip clip;
    try {
      clip = loader(entry);
    } catch (const std::exception& e) {
      for (std::size_t s = 0; s < setups.size(); ++s) {
        for (std::size_t v = 0; v < n_views; ++v) slot(s, v).error = std::string("load: ") + e.what();
      }
      return;
    }
    SongContext ctx(clip);
    for (std::size_t s = 0; s < setups.size(); ++s) {
      try {
        const auto kl = ctx.evaluate(setups[s], views, entry.id);
        for (std::size_t v = 0; v < n_views; ++v) slot(s, v).kl = kl.at(views[v]);
      } catch (const std::exception& e) {
        for (std::size_t v = 0; v < n_views; ++v) slot(s, v).error = e.what();
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, options.jobs), std::max<std::size_t>(1, n_songs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_songs; ++i) run_song(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n_songs; i = next++) run_song(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  EvalReport report;
  report.dataset_id = options.dataset_id;
  report.seed = options.seed;
  for (std::size_t s = 0; s < setups.size(); ++s) {
    for (std::size_t v = 0; v < n_views; ++v) {
      EvalRow row;
      row.setup = setups[s];
      row.descriptor = setups[s].descriptor();
      row.view = views[v];
      double sum = 0.0;
      std::size_t ok = 0;
      for (std::size_t song = 0; song < n_songs; ++song) {
        SongOutcome& o = outcomes[(s * n_views + v) * n_songs + song];
        if (o.kl) {
          sum += *o.kl;
          ++ok;
        } else {
          ++row.failures;
        }
        row.songs.push_back(std::move(o));
      }
      row.mean_kl = ok > 0 ? sum / static_cast<double>(ok) : kNan;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

EvalRow evaluate_setup(const std::vector<ManifestEntry>& manifest, const SummaryConfig& setup,
                       FeatureView view, const EvalOptions& options) {
  const FeatureView views[] = {view};
  EvalRow row = evaluate_grid(manifest, {setup}, views, options).rows.front();
  if (row.failures == row.songs.size()) {
    throw EvaluationError("every song failed for " + row.descriptor + ": " + row.songs.front().error);
  }
  return row;
}

// ---------------------------------------------------------------------------

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  for (double v : values) {
    if (std::isnan(v)) throw EvaluationError("cannot rank NaN");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && values[idx[j]] == values[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + 1 + j);  // mean of positions i+1..j
    for (std::size_t t = i; t < j; ++t) ranks[idx[t]] = r;
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw EvaluationError("spearman: length mismatch");
  if (x.size() < 2) throw EvaluationError("spearman: need at least two values");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;  // average ranks always sum to n(n+1)/2
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw EvaluationError("spearman: constant input");
  const double denom = sxx == syy ? sxx : std::sqrt(sxx) * std::sqrt(syy);
  return std::clamp(sxy / denom, -1.0, 1.0);
}

CorrelationSummary compare_setups(const EvalReport& a, const EvalReport& b) {
  auto index = [](const EvalReport& r, const char* name) {
    std::map<std::string, double> out;
    std::set<FeatureView> views;
    for (const auto& row : r.rows) {
      views.insert(row.view);
      if (!out.emplace(row.descriptor, row.mean_kl).second) {
        throw EvaluationError(std::string("compare: duplicate setup in report ") + name + ": " + row.descriptor);
      }
    }
    if (views.size() > 1) throw EvaluationError(std::string("compare: report ") + name + " mixes views");
    return out;
  };
  const auto ia = index(a, "a");
  const auto ib = index(b, "b");
  if (ia.size() != ib.size()) throw EvaluationError("compare: setup sets differ");
  CorrelationSummary out;
  std::vector<double> xa, xb;
  for (const auto& row : a.rows) {
    auto it = ib.find(row.descriptor);
    if (it == ib.end()) throw EvaluationError("compare: setup missing from report b: " + row.descriptor);
    if (std::isnan(row.mean_kl) || std::isnan(it->second)) {
      throw EvaluationError("compare: setup without successful songs: " + row.descriptor);
    }
    out.table.push_back({row.descriptor, row.mean_kl, it->second});
    xa.push_back(row.mean_kl);
    xb.push_back(it->second);
  }
  out.rho = spearman_rho(xa, xb);
  return out;
}

std::vector<BestSetup> best_on_average(const EvalReport& report) {
  struct Group {
    std::string method;
    FeatureView view;
    std::string descriptor;
    double sum = 0.0;
    int count = 0;
    bool valid = true;
  };
  std::vector<Group> groups;
  for (const auto& row : report.rows) {
    const std::string method(method_name(row.setup.method));
    const std::string desc = row.setup.descriptor_without_duration();
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.view == row.view && g.descriptor == desc;
    });
    if (it == groups.end()) {
      groups.push_back({method, row.view, desc});
      it = std::prev(groups.end());
    }
    if (std::isnan(row.mean_kl)) it->valid = false;
    it->sum += row.mean_kl;
    ++it->count;
  }
  std::vector<BestSetup> best;
  for (const auto& g : groups) {
    if (!g.valid) continue;
    const double avg = g.sum / g.count;
    auto it = std::find_if(best.begin(), best.end(), [&](const BestSetup& b) {
      return b.method == g.method && b.view == g.view;
    });
    if (it == best.end()) {
      best.push_back({g.method, g.view, g.descriptor, avg});
    } else if (avg < it->average_kl) {
      *it = {g.method, g.view, g.descriptor, avg};
    }
  }
  return best;
}

std::string report_table(const EvalReport& report) {
  std::string out = "descriptor\tmethod\tview\tduration_s\tmean_kl\tsongs\tfailures\n";
  for (const auto& row : report.rows) {
    out += row.descriptor + "\t" + std::string(method_name(row.setup.method)) + "\t" +
           std::string(view_name(row.view)) + "\t" + fmt(row.setup.duration_s) + "\t" +
           fmt(row.mean_kl) + "\t" + std::to_string(row.songs.size()) + "\t" +
           std::to_string(row.failures) + "\n";
  }
  return out;
}

nlohmann::ordered_json report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["version"] = report.version;
  j["dataset_id"] = report.dataset_id;
  j["seed"] = report.seed;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["descriptor"] = row.descriptor;
    r["view"] = view_name(row.view);
    r["setup"] = row.setup.to_json();
    r["mean_kl"] = std::isnan(row.mean_kl) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(row.mean_kl);
    r["failures"] = row.failures;
    r["songs"] = nlohmann::ordered_json::array();
    for (const auto& s : row.songs) {
      nlohmann::ordered_json o;
      o["id"] = s.id;
      o["kl"] = s.kl ? nlohmann::ordered_json(*s.kl) : nlohmann::ordered_json(nullptr);
      if (!s.kl) o["error"] = s.error;
      r["songs"].push_back(std::move(o));
    }
    j["rows"].push_back(std::move(r));
  }
  j["best_on_average"] = nlohmann::ordered_json::array();
  for (const auto& b : best_on_average(report)) {
    j["best_on_average"].push_back(
        {{"method", b.method}, {"view", view_name(b.view)}, {"descriptor", b.descriptor}, {"average_kl", b.average_kl}});
  }
  return j;
}

}  // namespace audiosum
