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

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "audiosum/commands.hpp"
#include "audiosum/evaluation.hpp"
#include "audiosum/synthetic.hpp"
#include "support.hpp"

using namespace audiosum;
using testsupport::slurp;
using testsupport::TempDir;

namespace {

AudioClip noise(std::uint64_t seed, double seconds) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  AudioClip c;
  c.samples.resize(static_cast<std::size_t>(seconds * kCanonicalRate));
  for (double& s : c.samples) s = u(gen);
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(AUDIOSUM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
  CHECK(exit_code_for(0, 3) == kExitOk);
  CHECK(exit_code_for(1, 3) == kExitPartialFailure);
  CHECK(exit_code_for(3, 3) == kExitTotalFailure);
  CHECK(exit_code_for(0, 0) == kExitTotalFailure);
}

TEST_CASE("summarize a 60 s song with the sampler") {
  TempDir dir("cli_sampler");
  SyntheticOptions o;
  o.song_s = 60.0;
  write_audio(make_synthetic_song("song", 3, o).clip, dir / "song.wav");
  SummaryConfig c;
  c.duration_s = 5.0;
  std::ostringstream log;
  REQUIRE(cmd_summarize(dir / "song.wav", c, dir / "out", 1, log) == kExitOk);
  const AudioClip out = load_audio(dir / "out" / "song.wav");
  CHECK(out.size() == 100 * 1102);
  CHECK(out.duration_s() == doctest::Approx(5.0).epsilon(0.001));
  const auto side = nlohmann::json::parse(slurp(dir / "out" / "song.selection.json"));
  CHECK(side["selection"]["frame_indices"].size() == 100);
  CHECK(side["selection"]["method"] == "gaussian-sampler");

  const std::string wav = slurp(dir / "out" / "song.wav");
  const std::string json = slurp(dir / "out" / "song.selection.json");
  REQUIRE(cmd_summarize(dir / "song.wav", c, dir / "again", 1, log) == kExitOk);
  CHECK(slurp(dir / "again" / "song.wav") == wav);
  CHECK(slurp(dir / "again" / "song.selection.json") == json);
}

TEST_CASE("middle segment of a 300 s song") {
  TempDir dir("cli_middle");
  write_audio(noise(1, 300.0), dir / "long.wav");
  SummaryConfig c;
  c.method = Method::kMiddle;
  c.duration_s = 30.0;
  std::ostringstream log;
  REQUIRE(cmd_summarize(dir / "long.wav", c, dir / "out", 1, log) == kExitOk);
  const AudioClip in = load_audio(dir / "long.wav");
  const AudioClip out = load_audio(dir / "out" / "long.wav");
  const std::vector<double> want(in.samples.begin() + 135 * 22050, in.samples.begin() + 165 * 22050);
  CHECK(out.samples == want);
}

TEST_CASE("manifest runs isolate failures") {
  TempDir dir("cli_manifest");
  SyntheticOptions o;
  o.song_s = 12.0;
  auto entries = write_synthetic_corpus(dir.path(), make_synthetic_corpus(2, 5, o));
  std::ofstream(dir / "manifest.tsv", std::ios::app) << "ghost\tmissing.wav\n";
  SummaryConfig c;
  c.method = Method::kBeginning;
  c.duration_s = 3.0;
  std::ostringstream log;
  CHECK(cmd_summarize(dir / "manifest.tsv", c, dir / "out", 2, log) == kExitPartialFailure);
  CHECK(log.str().find("ghost: error") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "out" / "song00.wav"));

  std::ofstream(dir / "dead.tsv") << "a\tnothere.wav\nb\talsonot.wav\n";
  CHECK(cmd_summarize(dir / "dead.tsv", c, dir / "out2", 1, log) == kExitTotalFailure);
}

TEST_CASE("evaluate writes reports with one row per setup and view") {
  TempDir dir("cli_eval");
  SyntheticOptions o;
  o.song_s = 20.0;
  write_synthetic_corpus(dir.path(), make_synthetic_corpus(3, 8, o));
  std::ofstream(dir / "grid.txt") << "method=gaussian-sampler,middle duration=4,100\n";
  const std::vector<FeatureView> views = {FeatureView::kRaw, FeatureView::kLogMel};
  std::ostringstream log;
  REQUIRE(cmd_evaluate(dir / "manifest.tsv", dir / "grid.txt", views, dir / "a", 1, log) == kExitOk);
  REQUIRE(cmd_evaluate(dir / "manifest.tsv", dir / "grid.txt", views, dir / "b", 2, log) == kExitOk);
  for (const char* f : {"report.tsv", "report.json", "run.json"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const auto report = nlohmann::json::parse(slurp(dir / "a" / "report.json"));
  REQUIRE(report["rows"].size() == 8);
  for (const auto& row : report["rows"]) {
    if (row["duration_s"] == 100.0) CHECK(row["mean_kl"] == 0.0);
  }
}

TEST_CASE("features and kl commands") {
  TempDir dir("cli_feat");
  const AudioClip a = noise(2, 2.0);
  write_audio(a, dir / "a.wav");
  std::ostringstream log;
  CHECK(cmd_features(dir / "a.wav", FeatureView::kMfcc, 0.05, dir / "a.asfc", log) == kExitOk);
  const FeatureSequence f = read_feature_cache(dir / "a.asfc");
  CHECK(f.dim() == 20);
  CHECK(f.count() == 40);

  std::ostringstream out;
  CHECK(cmd_kl(dir / "a.wav", dir / "a.wav", false, out) == kExitOk);
  CHECK(out.str() == "raw\t0\nlogmel\t0\n");
}

TEST_CASE("binary: usage errors exit with 2") {
  TempDir dir("cli_bin");
  write_audio(noise(3, 1.0), dir / "x.wav");
  const std::string in = (dir / "x.wav").string();
  const std::string out = (dir / "o").string();
  CHECK(run_cli("") == kExitUsage);
  CHECK(run_cli("summarize " + in + " --out " + out + " --method nope") == kExitUsage);
  CHECK(run_cli("summarize " + in + " --out " + out + " --lambda 3 --method mmr") == kExitUsage);
  CHECK(run_cli("summarize " + in + " --out " + out + " --bogus-flag") == kExitUsage);
  CHECK(run_cli("features " + in + " --out " + out + ".f --view chroma") == kExitUsage);
  CHECK(run_cli("summarize " + in + " --out " + out + " --method beginning --duration 0.5") == kExitOk);
  CHECK(run_cli("kl " + in + " " + in) == kExitOk);
}

}  // TEST_SUITE
