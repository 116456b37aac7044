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

// Brute-force spectral reference: direct DFT sums, mel triangles evaluated
// per bin from the mel formula, DCT-II written out term by term. Slow by
// design; no code shared with the library.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline double mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double inv_mel(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

struct Frames {
  std::size_t frame_len = 0;
  std::size_t n_fft = 0;
  std::size_t count = 0;
};

inline Frames framing(std::size_t n_samples, int sr, double frame_s) {
  Frames f;
  f.frame_len = static_cast<std::size_t>(std::floor(frame_s * sr + 1e-9));
  f.n_fft = 1;
  while (f.n_fft < f.frame_len) f.n_fft *= 2;
  f.count = n_samples / f.frame_len;
  return f;
}

// |DFT|^2 of the Hann-windowed, zero-padded frame at bins 0..n_fft/2.
inline std::vector<double> power_spectrum(const double* x, std::size_t len, std::size_t n_fft) {
  const double two_pi = 2.0 * std::acos(-1.0);
  std::vector<double> windowed(len);
  for (std::size_t n = 0; n < len; ++n) {
    windowed[n] = x[n] * (0.5 - 0.5 * std::cos(two_pi * static_cast<double>(n) / static_cast<double>(len)));
  }
  std::vector<double> out(n_fft / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
      // Reduce k*n mod n_fft exactly before forming the angle.
      const std::size_t phase = (k * n) % n_fft;
      const double a = two_pi * static_cast<double>(phase) / static_cast<double>(n_fft);
      re += windowed[n] * std::cos(a);
      im -= windowed[n] * std::sin(a);
    }
    out[k] = re * re + im * im;
  }
  return out;
}

// Triangle b (0-based) of an n_bands bank spanning 0 Hz..sr/2, at frequency f.
inline double triangle(int b, int n_bands, int sr, double f) {
  const double top = mel(sr / 2.0);
  const double lo = inv_mel(top * b / (n_bands + 1));
  const double mid = inv_mel(top * (b + 1) / (n_bands + 1));
  const double hi = inv_mel(top * (b + 2) / (n_bands + 1));
  if (f > lo && f <= mid) return (f - lo) / (mid - lo);
  if (f > mid && f < hi) return (hi - f) / (hi - mid);
  return 0.0;
}

inline std::vector<std::vector<double>> log_mel(const std::vector<double>& samples, int sr,
                                                double frame_s, int n_bands = 26) {
  const Frames fr = framing(samples.size(), sr, frame_s);
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < fr.count; ++i) {
    const std::vector<double> p = power_spectrum(samples.data() + i * fr.frame_len, fr.frame_len, fr.n_fft);
    std::vector<double> row(static_cast<std::size_t>(n_bands));
    for (int b = 0; b < n_bands; ++b) {
      double e = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        e += triangle(b, n_bands, sr, static_cast<double>(k) * sr / static_cast<double>(fr.n_fft)) * p[k];
      }
      row[static_cast<std::size_t>(b)] = std::log(e + 1e-10);
    }
    out.push_back(std::move(row));
  }
  return out;
}

// Orthonormal DCT-II, first n_out coefficients.
inline std::vector<double> dct2(const std::vector<double>& x, int n_out) {
  const double pi = std::acos(-1.0);
  const double n = static_cast<double>(x.size());
  std::vector<double> c(static_cast<std::size_t>(n_out));
  for (int k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (std::size_t m = 0; m < x.size(); ++m) {
      acc += x[m] * std::cos(pi / n * (static_cast<double>(m) + 0.5) * k);
    }
    c[static_cast<std::size_t>(k)] = acc * (k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n));
  }
  return c;
}

inline std::vector<std::vector<double>> mfcc(const std::vector<double>& samples, int sr,
                                             double frame_s, int n_coeffs = 20, int n_bands = 26) {
  std::vector<std::vector<double>> out;
  for (const auto& row : log_mel(samples, sr, frame_s, n_bands)) out.push_back(dct2(row, n_coeffs));
  return out;
}

}  // namespace oracle
