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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spinperc/lattice.hpp"

namespace spinperc {

/// Per-site uniforms U^x in [0,1) coupling every initial density rho.
class SeedField {
 public:
  SeedField() = default;
  SeedField(const BoxRegion& region, std::vector<double> uniforms);

  const BoxRegion& region() const noexcept { return region_; }
  double at(Site s) const { return uniforms_.at(region_.index_of_checked(s)); }
  double operator[](std::size_t i) const noexcept { return uniforms_[i]; }
  double& operator[](std::size_t i) noexcept { return uniforms_[i]; }
  std::span<const double> uniforms() const noexcept { return uniforms_; }

  friend bool operator==(const SeedField&, const SeedField&) = default;

 private:
  BoxRegion region_{};
  std::vector<double> uniforms_;
};

/// U^x for every site of the region; a function of (master_seed, replicate, x) only.
SeedField sample_seed_field(const BoxRegion& region, std::uint64_t master_seed,
                            std::uint64_t replicate = 0);

/// +1 iff u < rho.
constexpr Spin spin_from_seed(double u, double rho) noexcept {
  return u < rho ? Spin::plus() : Spin::minus();
}

/// The coupled initial configuration sigma_{rho,0} over the seed field's region.
SpinField initial_field(const SeedField& seeds, double rho);

/// One point (X, T, R, D) of the thickened clock process.
struct Mark {
  Site site{};
  double time = 0.0;
  double rate_uniform = 0.0;
  std::uint32_t ordinal = 0;  // index among the marks of the same site, in time order
  bool keep = true;

  friend bool operator==(const Mark&, const Mark&) = default;
};

/// Strict total order on marks: time, then site (row-major), then ordinal.
constexpr bool mark_before(const Mark& a, const Mark& b) noexcept {
  if (a.time != b.time) return a.time < b.time;
  if (a.site.y != b.site.y) return a.site.y < b.site.y;
  if (a.site.x != b.site.x) return a.site.x < b.site.x;
  return a.ordinal < b.ordinal;
}

/// Realized marks inside a space-time window, globally sorted and indexed per site.
class MarkSet {
 public:
  MarkSet() = default;
  /// Sorts `marks` and builds the per-site index. Marks must lie in the region and in [0, horizon].
  MarkSet(const BoxRegion& region, double horizon, std::uint32_t thickening,
          std::vector<Mark> marks);

  const BoxRegion& region() const noexcept { return region_; }
  double horizon() const noexcept { return horizon_; }
  std::uint32_t thickening() const noexcept { return thickening_; }
  std::size_t size() const noexcept { return marks_.size(); }
  bool empty() const noexcept { return marks_.empty(); }

  std::span<const Mark> marks() const noexcept { return marks_; }
  const Mark& operator[](std::size_t i) const noexcept { return marks_[i]; }

  /// Global indices of the marks of the site with row-major index `site_index`, in time order.
  std::span<const std::uint32_t> marks_at(std::size_t site_index) const noexcept {
    return {site_marks_.data() + site_offsets_[site_index],
            site_marks_.data() + site_offsets_[site_index + 1]};
  }

  std::size_t kept_count() const noexcept;

  /// Replaces every keep bit; `keep.size()` must equal size().
  MarkSet with_keep_bits(std::span<const std::uint8_t> keep) const;
  /// Marks of a sub-window of the region (same horizon and thickening).
  MarkSet restricted(const BoxRegion& window) const;

  friend bool operator==(const MarkSet& a, const MarkSet& b) {
    return a.region_ == b.region_ && a.horizon_ == b.horizon_ &&
           a.thickening_ == b.thickening_ && a.marks_ == b.marks_;
  }

 private:
  void build_index();

  BoxRegion region_{};
  double horizon_ = 0.0;
  std::uint32_t thickening_ = 1;
  std::vector<Mark> marks_;
  std::vector<std::uint32_t> site_offsets_;
  std::vector<std::uint32_t> site_marks_;
};

/// Samples the thickened process on region x [0, horizon]: per site a rate-k Poisson
/// clock with independent R ~ U[0,1) and D ~ Ber(1/k). Per-site draws depend only on
/// (master_seed, replicate, site), so overlapping regions agree on shared sites and a
/// longer horizon extends a shorter one.
MarkSet sample_marks(const BoxRegion& region, double horizon, std::uint32_t thickening,
                     std::uint64_t master_seed, std::uint64_t replicate = 0);

/// The marks of a single site, in time order, exactly as sample_marks draws them.
std::vector<Mark> sample_site_marks(Site site, double horizon, std::uint32_t thickening,
                                    std::uint64_t master_seed, std::uint64_t replicate);

/// Keeps only marks with D = 1 and relabels the thickening to 1.
MarkSet thin(const MarkSet& marks);

/// Fresh keep bits D ~ Ber(1/k), one per mark in global order, drawn from (seed, replicate).
std::vector<std::uint8_t> sample_keep_mask(const MarkSet& marks, std::uint64_t seed,
                                           std::uint64_t replicate);

/// The same skeleton with keep bits from sample_keep_mask.
MarkSet resample_keep_bits(const MarkSet& marks, std::uint64_t seed, std::uint64_t replicate);

}  // namespace spinperc
