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

#include "audiosum/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <iterator>

#include <unsupported/Eigen/FFT>

namespace audiosum {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(int n_bands, int sample_rate, int n_fft)
    : n_bands_(n_bands), sample_rate_(sample_rate), n_fft_(n_fft) {
  if (n_bands < 1 || sample_rate <= 0 || n_fft < 2) {
    throw FeatureError("MelFilterbank: invalid parameters");
  }
  const int n_bins = n_fft / 2 + 1;
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(n_bands + 2);
  for (int i = 0; i < n_bands + 2; ++i) {
    edges[i] = mel_to_hz(mel_max * i / (n_bands + 1));
  }
  weights_ = Eigen::MatrixXd::Zero(n_bands, n_bins);
  for (int m = 0; m < n_bands; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / n_fft;
      if (f > lo && f <= center) {
        weights_(m, k) = (f - lo) / (center - lo);
      } else if (f > center && f < hi) {
        weights_(m, k) = (hi - f) / (hi - center);
      }
    }
    if (weights_.row(m).maxCoeff() <= 0.0) {
      throw FeatureError("MelFilterbank: band " + std::to_string(m) +
                         " covers no FFT bin; frame too short for " +
                         std::to_string(n_bands) + " bands");
    }
  }
}

std::size_t frame_length_samples(double frame_len_s, int sample_rate) {
  if (!(frame_len_s > 0.0)) throw FeatureError("frame length must be positive");
  return static_cast<std::size_t>(std::floor(frame_len_s * sample_rate + 1e-9));
}

std::vector<FrameSpan> frame_signal(const AudioClip& clip, double frame_len_s) {
  const std::size_t len = frame_length_samples(frame_len_s, clip.sample_rate);
  if (len == 0) throw FeatureError("frame shorter than one sample");
  const std::size_t n = clip.samples.size() / len;
  if (n == 0) {
    throw FeatureError("clip of " + std::to_string(clip.samples.size()) +
                       " samples is shorter than one " + std::to_string(len) +
                       "-sample frame");
  }
  std::vector<FrameSpan> frames(n);
  for (std::size_t i = 0; i < n; ++i) frames[i] = {i * len, len};
  return frames;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Eigen::VectorXd hann_window(std::size_t n) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    w[static_cast<Eigen::Index>(i)] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / n);
  }
  return w;
}

Eigen::MatrixXd dct2_matrix(int n_out, int n_in) {
  Eigen::MatrixXd d(n_out, n_in);
  for (int k = 0; k < n_out; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n_in);
    for (int m = 0; m < n_in; ++m) {
      d(k, m) = scale * std::cos(M_PI * k * (m + 0.5) / n_in);
    }
  }
  return d;
}

FeatureSequence log_mel(const AudioClip& clip, double frame_len_s, int n_bands) {
  const auto frames = frame_signal(clip, frame_len_s);
  const std::size_t len = frames.front().length;
  const std::size_t n_fft = next_pow2(std::max<std::size_t>(len, 2));
  const MelFilterbank bank(n_bands, clip.sample_rate, static_cast<int>(n_fft));
  const Eigen::VectorXd window = hann_window(len);
  const Eigen::Index n_bins = static_cast<Eigen::Index>(n_fft / 2 + 1);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> buffer(n_fft);
  std::vector<std::complex<double>> spectrum;
  Eigen::VectorXd power(n_bins);

  FeatureSequence out;
  out.frame_len_s = frame_len_s;
  out.vectors.resize(static_cast<Eigen::Index>(frames.size()), n_bands);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    std::fill(buffer.begin(), buffer.end(), 0.0);
    const double* x = clip.samples.data() + frames[f].begin;
    for (std::size_t i = 0; i < len; ++i) buffer[i] = x[i] * window[static_cast<Eigen::Index>(i)];
    fft.fwd(spectrum, buffer);
    for (Eigen::Index k = 0; k < n_bins; ++k) power[k] = std::norm(spectrum[static_cast<std::size_t>(k)]);
    const Eigen::VectorXd bands = bank.apply(power);
    for (int b = 0; b < n_bands; ++b) {
      out.vectors(static_cast<Eigen::Index>(f), b) = std::log(bands[b] + kSpectralFloor);
    }
  }
  return out;
}

FeatureSequence mfcc(const AudioClip& clip, double frame_len_s, int n_coeffs,
                     int n_bands) {
  if (n_coeffs < 1 || n_coeffs > n_bands) {
    throw FeatureError("mfcc: coefficient count must be in [1, n_bands]");
  }
  FeatureSequence mel = log_mel(clip, frame_len_s, n_bands);
  const Eigen::MatrixXd dct = dct2_matrix(n_coeffs, n_bands);
  FeatureSequence out;
  out.frame_len_s = frame_len_s;
  out.vectors = mel.vectors * dct.transpose();
  return out;
}

FeatureSequence raw_sample_stream(const AudioClip& clip) {
  if (clip.samples.empty()) throw FeatureError("raw_sample_stream: empty clip");
  FeatureSequence out;
  out.frame_len_s = 0.0;
  out.vectors = Eigen::Map<const RowMatrix>(clip.samples.data(),
                                            static_cast<Eigen::Index>(clip.samples.size()), 1);
  return out;
}

FeatureView parse_view(std::string_view name) {
  if (name == "raw") return FeatureView::kRaw;
  if (name == "logmel" || name == "log-mel") return FeatureView::kLogMel;
  if (name == "mfcc") return FeatureView::kMfcc;
  throw FeatureError("unknown view '" + std::string(name) + "' (raw, logmel, mfcc)");
}

std::string_view view_name(FeatureView view) {
  switch (view) {
    case FeatureView::kRaw: return "raw";
    case FeatureView::kLogMel: return "logmel";
    case FeatureView::kMfcc: return "mfcc";
  }
  return "?";
}

FeatureSequence extract_view(const AudioClip& clip, FeatureView view,
                             double frame_len_s) {
  switch (view) {
    case FeatureView::kRaw: return raw_sample_stream(clip);
    case FeatureView::kLogMel: return log_mel(clip, frame_len_s);
    case FeatureView::kMfcc: return mfcc(clip, frame_len_s);
  }
  throw FeatureError("unknown view");
}

namespace {

constexpr char kCacheMagic[4] = {'A', 'S', 'F', 'C'};
constexpr std::uint32_t kCacheVersion = 1;

template <typename T>
void put_le(std::string& out, T value) {
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  out.append(reinterpret_cast<const char*>(raw), sizeof(T));
}

template <typename T>
T get_le(const std::vector<char>& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw FeatureError("feature cache truncated");
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, raw, sizeof(T));
  return value;
}

}  // namespace

void write_feature_cache(const FeatureSequence& seq, const std::filesystem::path& path) {
  std::string out(kCacheMagic, 4);
  put_le<std::uint32_t>(out, kCacheVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(seq.dim()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(seq.count()));
  put_le<double>(out, seq.frame_len_s);
  for (Eigen::Index r = 0; r < seq.count(); ++r) {
    for (Eigen::Index c = 0; c < seq.dim(); ++c) put_le<double>(out, seq.vectors(r, c));
  }
  write_file_atomic(path, out);
}

FeatureSequence read_feature_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FeatureError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kCacheMagic, 4) != 0) {
    throw FeatureError(path.string() + ": not a feature cache");
  }
  std::size_t pos = 4;
  if (get_le<std::uint32_t>(bytes, pos) != kCacheVersion) {
    throw FeatureError(path.string() + ": unsupported cache version");
  }
  const auto dim = get_le<std::uint32_t>(bytes, pos);
  const auto rows = get_le<std::uint64_t>(bytes, pos);
  FeatureSequence seq;
  seq.frame_len_s = get_le<double>(bytes, pos);
  if (bytes.size() - pos != rows * dim * sizeof(double)) {
    throw FeatureError(path.string() + ": size does not match header");
  }
  seq.vectors.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (Eigen::Index r = 0; r < seq.vectors.rows(); ++r) {
    for (Eigen::Index c = 0; c < seq.vectors.cols(); ++c) seq.vectors(r, c) = get_le<double>(bytes, pos);
  }
  return seq;
}

}  // namespace audiosum
