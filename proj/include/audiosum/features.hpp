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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "audiosum/audio_io.hpp"

namespace audiosum {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One feature vector per row. frame_len_s is 0 for the raw-sample view.
struct FeatureSequence {
  RowMatrix vectors;
  double frame_len_s = 0.0;

  Eigen::Index count() const { return vectors.rows(); }
  Eigen::Index dim() const { return vectors.cols(); }
};

class FeatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMelBands = 26;
inline constexpr int kMfccCoeffs = 20;
inline constexpr double kSpectralFloor = 1e-10;

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular mel filters, 50% overlap, spanning 0 Hz to Nyquist. Rows are
/// bands, columns are the n_fft/2 + 1 one-sided FFT bins.
class MelFilterbank {
 public:
  MelFilterbank(int n_bands, int sample_rate, int n_fft);

  int n_bands() const { return n_bands_; }
  int sample_rate() const { return sample_rate_; }
  int n_fft() const { return n_fft_; }
  const Eigen::MatrixXd& weights() const { return weights_; }

  /// Band energies of a one-sided power spectrum.
  Eigen::VectorXd apply(const Eigen::VectorXd& power) const {
    return weights_ * power;
  }

 private:
  int n_bands_;
  int sample_rate_;
  int n_fft_;
  Eigen::MatrixXd weights_;
};

struct FrameSpan {
  std::size_t begin;
  std::size_t length;
};

/// floor(frame_len_s * sample_rate), with a small guard against the
/// representation error of decimal frame sizes.
std::size_t frame_length_samples(double frame_len_s, int sample_rate);

/// Contiguous non-overlapping frames; the trailing partial frame is dropped.
std::vector<FrameSpan> frame_signal(const AudioClip& clip, double frame_len_s);

std::size_t next_pow2(std::size_t n);

/// Periodic Hann window of length n.
Eigen::VectorXd hann_window(std::size_t n);

/// Orthonormal DCT-II basis, `n_out` rows by `n_in` columns.
Eigen::MatrixXd dct2_matrix(int n_out, int n_in);

/// Windowed, zero-padded power spectrum -> mel bands -> log(E + floor).
FeatureSequence log_mel(const AudioClip& clip, double frame_len_s = 0.05,
                        int n_bands = kMelBands);

/// log_mel followed by an orthonormal DCT-II; coefficients 0..n_coeffs-1.
FeatureSequence mfcc(const AudioClip& clip, double frame_len_s,
                     int n_coeffs = kMfccCoeffs, int n_bands = kMelBands);

/// One 1-D vector per sample.
FeatureSequence raw_sample_stream(const AudioClip& clip);

enum class FeatureView { kRaw, kLogMel, kMfcc };

FeatureView parse_view(std::string_view name);
std::string_view view_name(FeatureView view);

/// Extracts the named view; `frame_len_s` is ignored by the raw view.
FeatureSequence extract_view(const AudioClip& clip, FeatureView view,
                             double frame_len_s);

// Feature cache: little-endian binary container.
//   magic "ASFC", u32 version (1), u32 dim, u64 rows, f64 frame_len_s,
//   rows*dim f64 values in row-major order.
void write_feature_cache(const FeatureSequence& seq,
                         const std::filesystem::path& path);
FeatureSequence read_feature_cache(const std::filesystem::path& path);

}  // namespace audiosum
