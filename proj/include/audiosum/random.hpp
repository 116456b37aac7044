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
#include <random>
#include <string_view>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace audiosum {

/// Seed-reproducible random stream.
///
/// The engine (std::mt19937_64) has a standardized output sequence and the
/// distributions come from Boost.Random, whose algorithms do not vary across
/// standard library implementations. Together they make every draw sequence
/// replayable on any machine. `kAlgorithm` is written into run records.
class RandomStream {
 public:
  static constexpr std::string_view kAlgorithm =
      "mt19937_64/boost-normal-ziggurat/boost-uniform";

  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  double normal() { return normal_(engine_); }
  double uniform() { return boost::random::uniform_01<double>()(engine_); }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  /// Independent child stream; depends only on this stream's seed and `key`.
  RandomStream split(std::string_view key) const;
  RandomStream split(std::uint64_t key) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed derived from a parent seed and a string key (e.g. a song id).
std::uint64_t derive_seed(std::uint64_t parent, std::string_view key);

}  // namespace audiosum
