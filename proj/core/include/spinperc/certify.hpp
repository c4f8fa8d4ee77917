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

#include <cstdint>
#include <vector>

#include "spinperc/glauber.hpp"
#include "spinperc/lattice.hpp"
#include "spinperc/random_fields.hpp"

namespace spinperc {

/// How far to grow a target window before simulating it as if it were part of Z^2.
struct MarginPolicy {
  std::int32_t initial = -1;  // negative selects default_margin(horizon)
  int max_doublings = 3;
};

/// ceil(8 * horizon) + 16.
std::int32_t default_margin(double horizon);

/// Whether certification holds for the realized keep bits only or for every assignment.
enum class KeepBits { kRealized, kAny };

/// Per-site flags over marks.region(): 1 where sigma_t(x) might differ from its value
/// on Z^2 because some update read a site outside the region. Death marks clear the flag.
std::vector<std::uint8_t> glauber_taint(const MarkSet& marks, const GlauberParams& params,
                                        KeepBits keep = KeepBits::kRealized);

/// True iff no site of `window` is flagged.
bool window_clean(const std::vector<std::uint8_t>& taint, const BoxRegion& region,
                  const BoxRegion& window);

/// Randomness on window.expanded(margin) such that the dynamics restricted to `window`
/// agree with the dynamics on Z^2 for the same master seed.
struct CertifiedSample {
  BoxRegion window;
  std::int32_t margin = 0;
  int attempts = 0;
  SeedField seeds;
  MarkSet marks;
};

/// Empty mark set when horizon == 0.
MarkSet sample_marks_or_empty(const BoxRegion& region, double horizon, std::uint32_t thickening,
                              std::uint64_t master_seed, std::uint64_t replicate);

/// Samples and certifies, doubling the margin on failure. Throws MarginExhausted after
/// policy.max_doublings failed doublings.
CertifiedSample sample_certified(const BoxRegion& window, const GlauberParams& params,
                                 std::uint64_t master_seed, std::uint64_t replicate,
                                 const MarginPolicy& policy = {},
                                 KeepBits keep = KeepBits::kRealized);

}  // namespace spinperc
