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

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace testsupport {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("audiosum_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Minimal WAVE writer for decoder tests. `data` holds interleaved samples,
// already encoded.
inline void write_wav_bytes(const fs::path& path, int channels, int rate, int bits, int format_tag,
                            const std::string& data) {
  std::string out = "RIFF";
  put_le(out, 36 + data.size(), 4);
  out += "WAVEfmt ";
  put_le(out, 16, 4);
  put_le(out, static_cast<std::uint64_t>(format_tag), 2);
  put_le(out, static_cast<std::uint64_t>(channels), 2);
  put_le(out, static_cast<std::uint64_t>(rate), 4);
  put_le(out, static_cast<std::uint64_t>(rate) * channels * bits / 8, 4);
  put_le(out, static_cast<std::uint64_t>(channels * bits / 8), 2);
  put_le(out, static_cast<std::uint64_t>(bits), 2);
  out += "data";
  put_le(out, data.size(), 4);
  out += data;
  std::ofstream(path, std::ios::binary).write(out.data(), static_cast<std::streamsize>(out.size()));
}

inline void write_pcm16(const fs::path& path, int channels, int rate,
                        const std::vector<std::int16_t>& interleaved) {
  std::string data;
  for (std::int16_t s : interleaved) put_le(data, static_cast<std::uint16_t>(s), 2);
  write_wav_bytes(path, channels, rate, 16, 1, data);
}

inline std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& gen, Eigen::Index r, Eigen::Index c,
                                     double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = u(gen);
  }
  return m;
}

// Symmetric positive definite with eigenvalues in [lo, hi].
inline Eigen::MatrixXd random_spd(std::mt19937_64& gen, Eigen::Index d, double lo = 0.2,
                                  double hi = 3.0) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(gen, d, d));
  const Eigen::MatrixXd q = qr.householderQ();
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd ev(d);
  for (Eigen::Index i = 0; i < d; ++i) ev[i] = u(gen);
  const Eigen::MatrixXd s = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

}  // namespace testsupport
