// Copyright 2026 The spinperc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace spinperc {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11): a stateless bijection of a
/// 128-bit counter under a 64-bit key.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) noexcept;
};

/// Tags separating the independent families of randomness.
enum class Purpose : std::uint32_t {
  kSeedField = 1,
  kMarks = 2,
  kKeepResample = 3,
  kSeedResample = 4,
  kAlgorithm = 5,
  kInstance = 6,
  kGeneric = 7,
};

/// Label identifying a stream: what it is for, which replicate, and which site.
struct StreamLabel {
  Purpose purpose = Purpose::kGeneric;
  std::uint64_t replicate = 0;
  std::int32_t x = 0;
  std::int32_t y = 0;
};

/// 64-bit finalizer from SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: a pure function of (master seed, label) and a draw index.
///
/// Two streams with the same seed and label produce identical sequences; the key
/// is derived from (seed, purpose, replicate) and the site sits in the counter, so
/// per-site draws do not depend on which region is being sampled.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, const StreamLabel& label) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next_u64(); }
  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  /// Exp(rate) variate.
  double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }
  bool bernoulli(double p) noexcept { return uniform() < p; }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  Philox4x32::Key key_{};
  Philox4x32::Counter counter_{};
  std::array<std::uint32_t, 4> block_{};
  int cursor_ = 4;
};

/// Derives a child seed, e.g. one per replicate of an experiment.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
  return mix64(seed ^ mix64(salt + 0x632be59bd9b4e019ULL));
}

}  // namespace spinperc
