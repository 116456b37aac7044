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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "audiosum/evaluation.hpp"
#include "audiosum/synthetic.hpp"
#include "oracles/ranking.hpp"
#include "support.hpp"

using namespace audiosum;

namespace {

struct Corpus {
  std::vector<SyntheticSong> songs;
  std::vector<ManifestEntry> manifest;
  EvalOptions options;
};

Corpus corpus(int n, std::uint64_t seed) {
  Corpus c;
  c.songs = make_synthetic_corpus(n, seed);
  std::map<std::string, const AudioClip*> by_id;
  for (const auto& s : c.songs) {
    c.manifest.push_back({s.id, s.id + ".wav"});
  }
  const auto* songs = &c.songs;
  c.options.loader = [songs](const ManifestEntry& e) {
    for (const auto& s : *songs) {
      if (s.id == e.id) return s.clip;
    }
    throw AudioError("no such song " + e.id);
  };
  return c;
}

SummaryConfig setup(Method m, double duration) {
  SummaryConfig s;
  s.method = m;
  s.duration_s = duration;
  return s;
}

const std::vector<FeatureView> kBothViews = {FeatureView::kRaw, FeatureView::kLogMel};

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("spearman basics") {
  const std::vector<double> x = {1, 5, 2, 8, 3};
  std::vector<double> rev = x;
  for (double& v : rev) v = -v;
  CHECK(spearman_rho(x, x) == 1.0);
  CHECK(spearman_rho(x, rev) == -1.0);
  const std::vector<double> c = {2, 2, 2, 2, 2};
  CHECK_THROWS_AS(spearman_rho(x, c), EvaluationError);
  CHECK_THROWS_AS(spearman_rho(std::vector<double>{1}, std::vector<double>{1}), EvaluationError);
}

TEST_CASE("average ranks") {
  const std::vector<double> v = {10, 20, 10, 30, 20, 20};
  CHECK(average_ranks(v) == std::vector<double>{1.5, 4, 1.5, 6, 4, 4});
  CHECK(average_ranks(v) == oracle::ranks(v));
}

TEST_CASE("spearman matches the rank-then-Pearson reference on tied data") {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + gen() % 30;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(gen() % 6);
      y[i] = static_cast<double>(gen() % 4) + (gen() % 2 ? 0.5 : 0.0);
    }
    if (*std::min_element(x.begin(), x.end()) == *std::max_element(x.begin(), x.end())) x[0] += 1;
    if (*std::min_element(y.begin(), y.end()) == *std::max_element(y.begin(), y.end())) y[0] += 1;
    CHECK(std::abs(spearman_rho(x, y) - oracle::spearman(x, y)) <= 1e-12);
  }
}

TEST_CASE("spearman is invariant under increasing transforms") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> x(20), y(20), fx(20), gy(20);
    for (int i = 0; i < 20; ++i) {
      x[i] = nd(gen);
      y[i] = x[i] + nd(gen);
      fx[i] = std::exp(3 * x[i]);
      gy[i] = std::atan(y[i]) + 5;
    }
    CHECK(spearman_rho(fx, gy) == doctest::Approx(spearman_rho(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("whole-song setups lose nothing") {
  Corpus c = corpus(2, 10);
  const auto views = std::vector<FeatureView>{FeatureView::kRaw, FeatureView::kLogMel,
                                              FeatureView::kMfcc};
  const EvalReport r = evaluate_grid(c.manifest, {setup(Method::kLexRank, 100), setup(Method::kEnd, 100)},
                                     views, c.options);
  REQUIRE(r.rows.size() == 6);
  for (const auto& row : r.rows) {
    CHECK(row.mean_kl == 0.0);
    for (const auto& s : row.songs) CHECK(*s.kl == 0.0);
  }
}

TEST_CASE("sampler beats the middle segment") {
  Corpus c = corpus(10, 20);
  const EvalReport r = evaluate_grid(
      c.manifest, {setup(Method::kGaussianSampler, 5), setup(Method::kMiddle, 5)}, kBothViews, c.options);
  REQUIRE(r.rows.size() == 4);
  for (FeatureView v : kBothViews) {
    const EvalReport one = r.for_view(v);
    CHECK(one.rows[0].mean_kl < one.rows[1].mean_kl);
  }
}

TEST_CASE("row means, determinism and scheduling independence") {
  Corpus c = corpus(4, 30);
  const std::vector<SummaryConfig> grid = {setup(Method::kGaussianSampler, 3), setup(Method::kMmr, 3),
                                           setup(Method::kAvs, 3)};
  const EvalReport a = evaluate_grid(c.manifest, grid, kBothViews, c.options);
  EvalOptions threaded = c.options;
  threaded.jobs = 3;
  const EvalReport b = evaluate_grid(c.manifest, grid, kBothViews, threaded);
  CHECK(report_table(a) == report_table(b));
  CHECK(report_json(a).dump() == report_json(b).dump());
  for (const auto& row : a.rows) {
    double sum = 0.0;
    for (const auto& s : row.songs) sum += *s.kl;
    CHECK(std::abs(row.mean_kl - sum / row.songs.size()) <= 1e-12);
  }

  const EvalRow single = evaluate_setup(c.manifest, grid[1], FeatureView::kLogMel, c.options);
  CHECK(single.mean_kl == a.for_view(FeatureView::kLogMel).rows[1].mean_kl);

  // Dropping a song leaves the others untouched.
  std::vector<ManifestEntry> fewer(c.manifest.begin() + 1, c.manifest.end());
  const EvalRow partial = evaluate_setup(fewer, grid[1], FeatureView::kLogMel, c.options);
  for (std::size_t i = 0; i < partial.songs.size(); ++i) {
    CHECK(*partial.songs[i].kl == *single.songs[i + 1].kl);
  }
}

TEST_CASE("an unreadable song is recorded, not fatal") {
  testsupport::TempDir dir("bad_song");
  const auto songs = make_synthetic_corpus(2, 40);
  auto manifest = write_synthetic_corpus(dir.path(), songs);
  std::ofstream(dir / "broken.wav") << "garbage";
  manifest.insert(manifest.begin() + 1, {"broken", dir / "broken.wav"});
  const EvalRow row = evaluate_setup(manifest, setup(Method::kGaussianSampler, 5), FeatureView::kRaw);
  CHECK(row.songs.size() == 3);
  CHECK(row.failures == 1);
  CHECK_FALSE(row.songs[1].kl.has_value());
  CHECK_FALSE(row.songs[1].error.empty());
  CHECK(row.mean_kl == doctest::Approx((*row.songs[0].kl + *row.songs[2].kl) / 2).epsilon(1e-15));

  const std::vector<ManifestEntry> only_bad = {{"broken", dir / "broken.wav"}};
  CHECK_THROWS_AS(evaluate_setup(only_bad, setup(Method::kMiddle, 5), FeatureView::kRaw),
                  EvaluationError);
}

TEST_CASE("grid preconditions") {
  Corpus c = corpus(1, 50);
  CHECK_THROWS_AS(evaluate_grid({}, {setup(Method::kEnd, 5)}, kBothViews, c.options), EvaluationError);
  CHECK_THROWS_AS(evaluate_grid(c.manifest, {setup(Method::kEnd, 5), setup(Method::kEnd, 5)}, kBothViews,
                                c.options),
                  ConfigError);
}

TEST_CASE("comparing reports") {
  Corpus c = corpus(3, 60);
  std::vector<SummaryConfig> grid;
  for (Method m : {Method::kGaussianSampler, Method::kGrasshopper, Method::kLexRank, Method::kBeginning,
                   Method::kMiddle, Method::kEnd}) {
    grid.push_back(setup(m, 5));
  }
  const EvalReport r = evaluate_grid(c.manifest, grid, kBothViews, c.options);
  const EvalReport raw = r.for_view(FeatureView::kRaw);
  const EvalReport lm = r.for_view(FeatureView::kLogMel);
  CHECK(compare_setups(raw, raw).rho == 1.0);
  CHECK(compare_setups(raw, lm).rho > 0.5);

  EvalReport shuffled = lm;
  std::reverse(shuffled.rows.begin(), shuffled.rows.end());
  CHECK(compare_setups(raw, shuffled).rho == compare_setups(raw, lm).rho);

  CHECK_THROWS_AS(compare_setups(r, r), EvaluationError);
  EvalReport fewer = lm;
  fewer.rows.pop_back();
  CHECK_THROWS_AS(compare_setups(raw, fewer), EvaluationError);
}

TEST_CASE("best on average over durations") {
  EvalReport r;
  auto add = [&](Method m, double duration, double lambda, double kl) {
    EvalRow row;
    row.setup = setup(m, duration);
    row.setup.lambda = lambda;
    row.descriptor = row.setup.descriptor();
    row.view = FeatureView::kRaw;
    row.mean_kl = kl;
    r.rows.push_back(row);
  };
  add(Method::kMmr, 5, 0.3, 1.0);
  add(Method::kMmr, 10, 0.3, 3.0);
  add(Method::kMmr, 5, 0.7, 2.0);
  add(Method::kMmr, 10, 0.7, 2.0);  // ties with lambda=0.3 on average
  add(Method::kGrasshopper, 5, 0.5, 4.0);
  const auto best = best_on_average(r);
  REQUIRE(best.size() == 2);
  CHECK(best[0].method == "mmr");
  CHECK(best[0].descriptor.find("lambda=0.3") != std::string::npos);
  CHECK(best[0].average_kl == 2.0);
  CHECK(best[1].method == "grasshopper");
}

TEST_CASE("report formats") {
  Corpus c = corpus(2, 70);
  const EvalReport r = evaluate_grid(c.manifest, {setup(Method::kBeginning, 4), setup(Method::kEnd, 4)},
                                     kBothViews, c.options);
  const std::string table = report_table(r);
  CHECK(table.rfind("descriptor\tmethod\tview\tduration_s\tmean_kl\tsongs\tfailures\n", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);
  const auto j = report_json(r);
  CHECK(j["rows"].size() == 4);
  CHECK(j["rows"][0]["songs"].size() == 2);
  CHECK(j.contains("best_on_average"));
}

}  // TEST_SUITE
