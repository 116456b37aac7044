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

#include "audiosum/audio_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <thread>

namespace audiosum {

namespace fs = std::filesystem;

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct WavFormat {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

double decode_sample(const unsigned char* p, const WavFormat& fmt) {
  if (fmt.format == kFormatFloat) {
    float f;
    std::uint32_t bits = read_u32(p);
    std::memcpy(&f, &bits, sizeof f);
    return std::isfinite(f) ? std::clamp(static_cast<double>(f), -1.0, 1.0) : 0.0;
  }
  switch (fmt.bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
    case 24: {
      std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32:
      return static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
    default:
      return 0.0;
  }
}

double kaiser(double x, double beta) {
  if (x < -1.0 || x > 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - x * x)) /
         std::cyl_bessel_i(0.0, beta);
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

}  // namespace

AudioClip load_audio_native(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AudioError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw AudioError(path.string() + ": not a RIFF/WAVE file");
  }

  WavFormat fmt;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    std::size_t size = read_u32(chunk + 4);
    std::size_t avail = bytes.size() - pos - 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > avail) throw AudioError(path.string() + ": bad fmt chunk");
      fmt.format = read_u16(chunk + 8);
      fmt.channels = read_u16(chunk + 10);
      fmt.sample_rate = read_u32(chunk + 12);
      fmt.block_align = read_u16(chunk + 20);
      fmt.bits = read_u16(chunk + 22);
      if (fmt.format == kFormatExtensible) {
        if (size < 40) throw AudioError(path.string() + ": bad extensible fmt chunk");
        fmt.format = read_u16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = std::min(size, avail);  // streamed files may lie about size
      break;
    }
    pos += 8 + size + (size & 1);
  }

  if (!have_fmt) throw AudioError(path.string() + ": missing fmt chunk");
  if (data == nullptr) throw AudioError(path.string() + ": missing data chunk");

  const bool int_ok = fmt.format == kFormatPcm &&
                      (fmt.bits == 8 || fmt.bits == 16 || fmt.bits == 24 || fmt.bits == 32);
  const bool float_ok = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!int_ok && !float_ok) {
    std::ostringstream msg;
    msg << path.string() << ": unsupported encoding (format " << fmt.format
        << ", " << fmt.bits << " bits)";
    throw AudioError(msg.str());
  }
  if (fmt.channels < 1 || fmt.channels > 2) {
    throw AudioError(path.string() + ": unsupported channel count " +
                     std::to_string(fmt.channels));
  }
  if (fmt.sample_rate == 0) throw AudioError(path.string() + ": zero sample rate");

  const std::size_t bytes_per_sample = fmt.bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  const std::size_t n = data_size / frame_bytes;
  if (n == 0) throw AudioError(path.string() + ": zero-length audio");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(fmt.sample_rate);
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char* p = data + i * frame_bytes;
    double acc = 0.0;
    for (int c = 0; c < fmt.channels; ++c) acc += decode_sample(p + c * bytes_per_sample, fmt);
    clip.samples[i] = acc / fmt.channels;
  }
  return clip;
}

AudioClip load_audio(const fs::path& path) {
  AudioClip clip = load_audio_native(path);
  if (clip.sample_rate != kCanonicalRate) {
    clip.samples = resample(clip.samples, clip.sample_rate, kCanonicalRate);
    clip.sample_rate = kCanonicalRate;
    for (double& s : clip.samples) s = std::clamp(s, -1.0, 1.0);
    if (clip.samples.empty()) throw AudioError(path.string() + ": zero-length audio");
  }
  return clip;
}

std::vector<double> resample(std::span<const double> input, int from_rate,
                             int to_rate) {
  if (from_rate <= 0 || to_rate <= 0) throw AudioError("resample: non-positive rate");
  if (from_rate == to_rate) return {input.begin(), input.end()};

  const long g = std::gcd(from_rate, to_rate);
  const long up = to_rate / g;
  const long down = from_rate / g;

  constexpr double kZeroCrossings = 32.0;
  constexpr double kRolloff = 0.94;
  constexpr double kBeta = 9.0;
  // Cutoff in cycles per input sample.
  const double fc = 0.5 * std::min(1.0, static_cast<double>(to_rate) / from_rate) * kRolloff;
  const double half_width = kZeroCrossings / (2.0 * fc);
  const long taps_half = static_cast<long>(std::ceil(half_width));
  const long taps = 2 * taps_half;

  // table[phase][m] weights input sample base - taps_half + 1 + m.
  std::vector<double> table(static_cast<std::size_t>(up * taps));
  for (long p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / up;
    double sum = 0.0;
    for (long m = 0; m < taps; ++m) {
      const double tau = frac + static_cast<double>(taps_half - 1 - m);
      const double h = 2.0 * fc * sinc(2.0 * fc * tau) * kaiser(tau / half_width, kBeta);
      table[p * taps + m] = h;
      sum += h;
    }
    for (long m = 0; m < taps; ++m) table[p * taps + m] /= sum;
  }

  const long n_in = static_cast<long>(input.size());
  const long n_out = static_cast<long>((static_cast<long long>(n_in) * up) / down);
  std::vector<double> out(static_cast<std::size_t>(n_out));
  for (long i = 0; i < n_out; ++i) {
    const long long pos = static_cast<long long>(i) * down;
    const long base = static_cast<long>(pos / up);
    const long phase = static_cast<long>(pos % up);
    const double* h = &table[phase * taps];
    const long first = base - taps_half + 1;
    double acc = 0.0;
    const long m_lo = std::max(0L, -first);
    const long m_hi = std::min(taps, n_in - first);
    for (long m = m_lo; m < m_hi; ++m) acc += h[m] * input[first + m];
    out[i] = acc;
  }
  return out;
}

TrimResult trim_silence(const AudioClip& clip, double threshold_db) {
  if (clip.samples.empty()) return {clip, true};
  const std::size_t n = clip.samples.size();
  const std::size_t window =
      std::max<std::size_t>(1, static_cast<std::size_t>(0.01 * clip.sample_rate));
  const double threshold = std::pow(10.0, threshold_db / 20.0);

  auto loud = [&](std::size_t begin) {
    const std::size_t end = std::min(n, begin + window);
    double energy = 0.0;
    for (std::size_t i = begin; i < end; ++i) energy += clip.samples[i] * clip.samples[i];
    return std::sqrt(energy / static_cast<double>(end - begin)) >= threshold;
  };

  const std::size_t n_windows = (n + window - 1) / window;
  std::size_t first = n_windows;
  for (std::size_t w = 0; w < n_windows; ++w) {
    if (loud(w * window)) {
      first = w;
      break;
    }
  }
  if (first == n_windows) return {clip, true};
  std::size_t last = first;
  for (std::size_t w = n_windows; w-- > first;) {
    if (loud(w * window)) {
      last = w;
      break;
    }
  }

  const std::size_t begin = first * window;
  const std::size_t end = std::min(n, (last + 1) * window);
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.assign(clip.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                     clip.samples.begin() + static_cast<std::ptrdiff_t>(end));
  return {std::move(out), false};
}

AudioClip synthesize_summary(const AudioClip& clip,
                             std::span<const std::size_t> frames,
                             std::size_t frame_len_samples) {
  if (frame_len_samples == 0) throw AudioError("synthesize_summary: zero frame length");
  std::vector<std::size_t> sorted(frames.begin(), frames.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw AudioError("synthesize_summary: duplicate frame index");
  }
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.reserve(sorted.size() * frame_len_samples);
  for (std::size_t f : sorted) {
    const std::size_t begin = f * frame_len_samples;
    if (begin + frame_len_samples > clip.samples.size()) {
      throw AudioError("synthesize_summary: frame index " + std::to_string(f) +
                       " out of range");
    }
    out.samples.insert(out.samples.end(),
                       clip.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                       clip.samples.begin() + static_cast<std::ptrdiff_t>(begin + frame_len_samples));
  }
  return out;
}

std::int16_t quantize_sample(double x) {
  // Full scale 32768 with a clamp at the positive rail keeps write->load
  // within one step (1/32768) everywhere.
  const double v = std::round(std::clamp(x, -1.0, 1.0) * 32768.0);
  return static_cast<std::int16_t>(std::clamp(v, -32768.0, 32767.0));
}

void write_audio(const AudioClip& clip, const fs::path& path) {
  if (clip.sample_rate <= 0) throw AudioError("write_audio: bad sample rate");
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (double s : clip.samples) put_u16(out, static_cast<std::uint16_t>(quantize_sample(s)));
  write_file_atomic(path, out);
}

void write_file_atomic(const fs::path& path, std::span<const char> bytes) {
  static std::atomic<unsigned long> counter{0};
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000) +
         "_" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw AudioError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw AudioError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw AudioError("cannot move into place: " + path.string());
  }
}

void write_file_atomic(const fs::path& path, const std::string& text) {
  write_file_atomic(path, std::span<const char>(text.data(), text.size()));
}

}  // namespace audiosum
