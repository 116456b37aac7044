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

#include "audiosum/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "audiosum/features.hpp"
#include "audiosum/random.hpp"

namespace audiosum {

namespace {

constexpr int kComponents = 3;
constexpr int kHarmonics = 6;
constexpr double kAmDepth = 0.3;
constexpr double kAmRateHz = 8.0;
constexpr double kFadeS = 0.002;
constexpr double kNoiseDb = -12.0;  // broadband floor relative to the tone

struct Component {
  double loudness_db;
  double log2_pitch;
  double brightness;  // harmonic h has amplitude h^-brightness
};

struct Note {
  double loudness_db;
  double pitch_hz;
  double brightness;
};

// Distinct centers, shuffled per song and jittered.
std::vector<Component> draw_components(RandomStream& rng) {
  const double loudness[kComponents] = {-26.0, -20.0, -14.0};
  const double pitch[kComponents] = {std::log2(140.0), std::log2(420.0), std::log2(1230.0)};
  const double brightness[kComponents] = {0.3, 1.4, 2.5};
  int perm_l[kComponents] = {0, 1, 2};
  int perm_p[kComponents] = {0, 1, 2};
  int perm_b[kComponents] = {0, 1, 2};
  for (int* perm : {perm_l, perm_p, perm_b}) {
    for (int i = kComponents - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.index(static_cast<std::size_t>(i) + 1)]);
    }
  }
  std::vector<Component> out;
  for (int c = 0; c < kComponents; ++c) {
    out.push_back({loudness[perm_l[c]] + 4.0 * (rng.uniform() - 0.5),
                   pitch[perm_p[c]] + 0.4 * (rng.uniform() - 0.5),
                   brightness[perm_b[c]] + 0.4 * (rng.uniform() - 0.5)});
  }
  return out;
}

Note draw_note(const Component& c, RandomStream& rng) {
  return {c.loudness_db + 3.0 * rng.normal(), std::exp2(c.log2_pitch + 0.12 * rng.normal()),
          std::max(0.0, c.brightness + 0.2 * rng.normal())};
}

void render_note(const Note& note, int sample_rate, std::size_t begin, std::size_t length,
                 RandomStream& rng, std::vector<double>& out) {
  const double nyquist = 0.5 * sample_rate;
  double phase[kHarmonics];
  double weight[kHarmonics];
  double energy = 0.0;
  for (int h = 0; h < kHarmonics; ++h) {
    phase[h] = 2.0 * std::numbers::pi * rng.uniform();
    const double f = note.pitch_hz * (h + 1);
    weight[h] = f < nyquist ? std::pow(h + 1.0, -note.brightness) : 0.0;
    energy += weight[h] * weight[h];
  }
  // Tone RMS equals the note loudness; the noise floor follows it.
  const double rms = std::pow(10.0, note.loudness_db / 20.0);
  const double gain = rms * std::sqrt(2.0 / energy);
  const double noise = rms * std::pow(10.0, kNoiseDb / 20.0);
  const double am_phase = 2.0 * std::numbers::pi * rng.uniform();
  const auto fade = static_cast<std::size_t>(kFadeS * sample_rate);
  for (std::size_t i = 0; i < length; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    double v = 0.0;
    for (int h = 0; h < kHarmonics; ++h) {
      v += weight[h] * std::sin(2.0 * std::numbers::pi * note.pitch_hz * (h + 1) * t + phase[h]);
    }
    double env = 1.0 + kAmDepth * std::sin(2.0 * std::numbers::pi * kAmRateHz * t + am_phase);
    if (i < fade) env *= static_cast<double>(i) / fade;
    if (length - i <= fade) env *= static_cast<double>(length - i) / fade;
    out[begin + i] = std::clamp(env * (gain * v + noise * rng.normal()), -1.0, 1.0);
  }
}

// Section labels: each component at least once, the rest drawn from random
// mixture weights, then shuffled.
std::vector<int> draw_sections(std::size_t n_sections, RandomStream& rng) {
  double weight[kComponents];
  double total = 0.0;
  for (double& w : weight) total += (w = -std::log(1.0 - rng.uniform()));
  std::vector<int> sections(n_sections);
  for (std::size_t s = 0; s < n_sections; ++s) {
    if (s < kComponents) {
      sections[s] = static_cast<int>(s);
      continue;
    }
    double u = rng.uniform() * total;
    int c = 0;
    while (c < kComponents - 1 && u >= weight[c]) u -= weight[c++];
    sections[s] = c;
  }
  for (std::size_t i = n_sections; i-- > 1;) std::swap(sections[i], sections[rng.index(i + 1)]);
  return sections;
}

}  // namespace

SyntheticSong make_synthetic_song(const std::string& id, std::uint64_t seed,
                                  const SyntheticOptions& options) {
  RandomStream rng(derive_seed(seed, id));
  const int sr = kCanonicalRate;
  const std::size_t note_len = frame_length_samples(options.note_s, sr);
  const auto n_notes = static_cast<std::size_t>(std::llround(options.song_s / options.note_s));
  const auto notes_per_section = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(options.section_s / options.note_s)));
  const std::size_t n_sections = (n_notes + notes_per_section - 1) / notes_per_section;

  const std::vector<Component> components = draw_components(rng);
  const std::vector<int> sections = draw_sections(n_sections, rng);

  SyntheticSong song;
  song.id = id;
  song.clip.sample_rate = sr;
  song.clip.samples.assign(n_notes * note_len, 0.0);
  for (std::size_t k = 0; k < n_notes; ++k) {
    const Component& c = components[static_cast<std::size_t>(sections[k / notes_per_section])];
    render_note(draw_note(c, rng), sr, k * note_len, note_len, rng, song.clip.samples);
  }
  return song;
}

std::vector<SyntheticSong> make_synthetic_corpus(int n_songs, std::uint64_t seed,
                                                 const SyntheticOptions& options) {
  std::vector<SyntheticSong> songs;
  for (int i = 0; i < n_songs; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "song%02d", i);
    songs.push_back(make_synthetic_song(id, seed, options));
  }
  return songs;
}

std::vector<ManifestEntry> write_synthetic_corpus(const std::filesystem::path& dir,
                                                  const std::vector<SyntheticSong>& songs) {
  std::filesystem::create_directories(dir);
  std::vector<ManifestEntry> entries;
  std::string manifest = "# id\tpath\n";
  for (const auto& song : songs) {
    const std::string file = song.id + ".wav";
    write_audio(song.clip, dir / file);
    manifest += song.id + "\t" + file + "\n";
    entries.push_back({song.id, dir / file});
  }
  write_file_atomic(dir / "manifest.tsv", manifest);
  return entries;
}

}  // namespace audiosum
