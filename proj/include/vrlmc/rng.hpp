// Copyright 2026 The vrlmc Authors
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

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

namespace vrlmc {

/// SplitMix64 step. Used for seeding and for hashing stream tuples.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Roles a chain can request independent streams for. Keeping batch
/// selection and Gaussian noise on separate streams means two methods run
/// with the same seed share their injected noise exactly.
enum class StreamRole : std::uint64_t {
  kNoise = 1,
  kBatch = 2,
  kEpoch = 3,
  kData = 4,
  kSplit = 5,
  kOptimizer = 6,
};

/// Mixes (seed, replica, role) into a 64-bit stream seed.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t replica,
                                 StreamRole role);

/**
 * xoshiro256** generator (Blackman & Vigna), state seeded by SplitMix64.
 *
 * Satisfies UniformRandomBitGenerator. Normal variates use the Box-Muller
 * transform and cache the second variate of each pair, so the sequence of
 * normals is a pure function of the seed.
 */
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);
  Rng(std::uint64_t seed, std::uint64_t replica, StreamRole role)
      : Rng(derive_stream_seed(seed, replica, role)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer on [0, n). Lemire's multiply-shift with rejection.
  std::size_t uniform_index(std::size_t n);

  /// Standard normal variate.
  double normal();

  /// Fills `out` with independent standard normals.
  void fill_normal(std::span<double> out);

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace vrlmc
