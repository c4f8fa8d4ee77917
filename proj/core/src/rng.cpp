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

#include "spinperc/rng.hpp"

namespace spinperc {

namespace {

constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;
constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;

inline void round_once(Philox4x32::Counter& c, const Philox4x32::Key& k) noexcept {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::apply(Counter ctr, Key key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
    round_once(ctr, key);
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t master_seed, const StreamLabel& label) noexcept {
  const std::uint64_t k =
      mix64(master_seed ^ mix64((static_cast<std::uint64_t>(label.purpose) << 56) ^
                                mix64(label.replicate)));
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  counter_ = {static_cast<std::uint32_t>(label.x), static_cast<std::uint32_t>(label.y), 0, 0};
}

std::uint64_t RngStream::next_u64() noexcept {
  if (cursor_ >= 4) {
    block_ = Philox4x32::apply(counter_, key_);
    if (++counter_[2] == 0) ++counter_[3];
    cursor_ = 0;
  }
  const std::uint64_t lo = block_[static_cast<std::size_t>(cursor_)];
  const std::uint64_t hi = block_[static_cast<std::size_t>(cursor_ + 1)];
  cursor_ += 2;
  return lo | (hi << 32);
}

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t RngStream::below(std::uint64_t n) noexcept {
  // Lemire's nearly divisionless method.
  u128 m = static_cast<u128>(next_u64()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<u128>(next_u64()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace spinperc
