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
#include <string>
#include <vector>

#include "audiosum/audio_io.hpp"
#include "audiosum/config.hpp"

namespace audiosum {

// Pseudo-songs for end-to-end tests. Each song has three note "components"
// drawing (loudness, pitch, timbre) from their own Gaussian. Sections of a
// single component recur with random mixture weights, so the song as a whole
// is a three-component mixture while any short stretch of it is not.
struct SyntheticOptions {
  double song_s = 40.0;
  double note_s = 0.05;
  double section_s = 4.0;
};

struct SyntheticSong {
  std::string id;
  AudioClip clip;
};

SyntheticSong make_synthetic_song(const std::string& id, std::uint64_t seed,
                                  const SyntheticOptions& options = {});

std::vector<SyntheticSong> make_synthetic_corpus(
    int n_songs, std::uint64_t seed, const SyntheticOptions& options = {});

/// Writes song WAVs plus `manifest.tsv` under `dir`; returns the manifest.
std::vector<ManifestEntry> write_synthetic_corpus(
    const std::filesystem::path& dir, const std::vector<SyntheticSong>& songs);

}  // namespace audiosum
