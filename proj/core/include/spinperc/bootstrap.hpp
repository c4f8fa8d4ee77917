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
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "spinperc/certify.hpp"
#include "spinperc/lattice.hpp"
#include "spinperc/random_fields.hpp"

namespace spinperc {

/// Flip rate lambda on the 5-site neighborhood {center, E, N, W, S}.
///
/// Configurations are indexed by bits c e n w s (most significant first), 1 for a +1 spin.
class RateTable {
 public:
  static constexpr std::size_t kSize = 32;

  RateTable(double epsilon, const std::array<double, kSize>& entries)
      : epsilon_(epsilon), entries_(entries) {}

  /// lambda = epsilon + (1 - epsilon) * (#plus neighbors) / 4, center ignored.
  static RateTable counting(double epsilon = 0.1);
  /// lambda identically equal to `value` (epsilon = value).
  static RateTable constant(double value);

  static constexpr std::size_t index(bool c, bool e, bool n, bool w, bool s) noexcept {
    return (std::size_t{c} << 4) | (std::size_t{e} << 3) | (std::size_t{n} << 2) |
           (std::size_t{w} << 1) | std::size_t{s};
  }

  double epsilon() const noexcept { return epsilon_; }
  double rate(std::size_t index) const noexcept { return entries_[index]; }
  const std::array<double, kSize>& entries() const noexcept { return entries_; }

 private:
  double epsilon_;
  std::array<double, kSize> entries_;
};

/// Human-readable descriptions of every violated constraint; empty iff the table is valid.
std::vector<std::string> rate_table_violations(const RateTable& table);
inline bool validate_rate_table(const RateTable& table) {
  return rate_table_violations(table).empty();
}

/// Parses 32 lines "c e n w s rate" (spins as -1/+1, '#' starts a comment). epsilon is
/// lambda(all -1). Throws ConfigError listing the violations of an invalid table.
RateTable parse_rate_table(const std::string& text);
RateTable load_rate_table(const std::string& path);

inline constexpr double kNever = std::numeric_limits<double>::infinity();

/// Per-site first time of +1 (kNever if the site is still -1 at the horizon).
struct FlipSchedule {
  BoxRegion region;
  std::vector<double> flip_times;
  /// False if some site of the region may flip earlier on Z^2 than in this finite run.
  bool exact = true;

  double at(Site s) const { return flip_times.at(region.index_of_checked(s)); }
};

/// Runs the bootstrap dynamics from all -1 on marks.region() using the kept marks;
/// sites outside the region count as -1. The result covers `window`.
FlipSchedule evolve_bootstrap(const MarkSet& marks, const RateTable& table, const BoxRegion& window);

SpinField field_at(const FlipSchedule& schedule, double t);

/// Infimum of the times with a +1 left-right crossing of `box`, or kNever.
double first_crossing_time(const FlipSchedule& schedule, const BoxRegion& box);

/// Marks with every time divided by `epsilon` and every rate uniform multiplied by it.
/// The constant-epsilon table on the result flips exactly at (constant-1 flip time) / epsilon.
MarkSet time_change(const MarkSet& marks, double epsilon);

/// Samples marks on window.expanded(margin) until the window's schedule is exact.
struct CertifiedBootstrap {
  MarkSet marks;
  FlipSchedule schedule;
  std::int32_t margin = 0;
};
CertifiedBootstrap sample_certified_bootstrap(const BoxRegion& window, double horizon,
                                              std::uint32_t thickening, const RateTable& table,
                                              std::uint64_t master_seed, std::uint64_t replicate,
                                              const MarginPolicy& policy = {});

}  // namespace spinperc
