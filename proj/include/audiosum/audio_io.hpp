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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace audiosum {

inline constexpr int kCanonicalRate = 22050;

/// Mono PCM signal. Amplitudes are kept in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = kCanonicalRate;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

class AudioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decodes a RIFF/WAVE file (8/16/24/32-bit integer or 32-bit float PCM,
/// one or two channels), downmixes to mono by channel average and resamples
/// to 22050 Hz.
AudioClip load_audio(const std::filesystem::path& path);

/// Decodes without downmix or resampling side effects on the rate; exposed
/// for tools that need the native rate. Channels are still averaged.
AudioClip load_audio_native(const std::filesystem::path& path);

/// Band-limited (Kaiser-windowed sinc, polyphase) sample-rate conversion.
std::vector<double> resample(std::span<const double> input, int from_rate,
                             int to_rate);

struct TrimResult {
  AudioClip clip;
  bool all_silent = false;
};

inline constexpr double kDefaultSilenceDb = -60.0;

/// Drops the leading and trailing runs of 10 ms windows whose RMS is below
/// `threshold_db` dBFS. An all-silent clip comes back unchanged, flagged.
TrimResult trim_silence(const AudioClip& clip,
                        double threshold_db = kDefaultSilenceDb);

/// Concatenates the sample spans of the given frames in ascending frame
/// order. Indices may arrive in any order but must be unique.
AudioClip synthesize_summary(const AudioClip& clip,
                             std::span<const std::size_t> frames,
                             std::size_t frame_len_samples);

/// 16-bit PCM mono WAVE. The file is written to a temporary sibling and
/// renamed into place.
void write_audio(const AudioClip& clip, const std::filesystem::path& path);

/// Quantizes one amplitude the way write_audio stores it.
std::int16_t quantize_sample(double x);

/// Writes `bytes` to `path` atomically (temp file in the same directory,
/// then rename).
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const char> bytes);
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& text);

}  // namespace audiosum
