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

#include "spinperc/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "spinperc/rng.hpp"

namespace spinperc {

SeedField::SeedField(const BoxRegion& region, std::vector<double> uniforms)
    : region_(region), uniforms_(std::move(uniforms)) {
  if (uniforms_.size() != region_.size()) {
    throw std::invalid_argument("seed field size does not match region");
  }
}

SeedField sample_seed_field(const BoxRegion& region, std::uint64_t master_seed,
                            std::uint64_t replicate) {
  std::vector<double> u(region.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Site s = region.site_at(i);
    RngStream rng(master_seed, {Purpose::kSeedField, replicate, s.x, s.y});
    u[i] = rng.uniform();
  }
  return SeedField(region, std::move(u));
}

SpinField initial_field(const SeedField& seeds, double rho) {
  SpinField out(seeds.region());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = spin_from_seed(seeds[i], rho);
  return out;
}

MarkSet::MarkSet(const BoxRegion& region, double horizon, std::uint32_t thickening,
                 std::vector<Mark> marks)
    : region_(region), horizon_(horizon), thickening_(thickening), marks_(std::move(marks)) {
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
  if (thickening < 1) throw std::invalid_argument("thickening must be >= 1");
  for (const Mark& m : marks_) {
    if (!region_.contains(m.site)) throw std::invalid_argument("mark outside region");
    if (m.time < 0.0 || m.time > horizon_) throw std::invalid_argument("mark outside horizon");
  }

  // Bucket sort on time; buckets hold O(1) marks on average.
  const std::size_t n = marks_.size();
  if (n > 1) {
    const std::size_t nb = n;
    const double scale = horizon_ > 0.0 ? static_cast<double>(nb) / horizon_ : 0.0;
    auto bucket_of = [&](const Mark& m) {
      auto b = static_cast<std::size_t>(m.time * scale);
      return b >= nb ? nb - 1 : b;
    };
    std::vector<std::uint32_t> start(nb + 1, 0);
    for (const Mark& m : marks_) ++start[bucket_of(m) + 1];
    for (std::size_t b = 0; b < nb; ++b) start[b + 1] += start[b];
    std::vector<Mark> sorted(n);
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (const Mark& m : marks_) sorted[fill[bucket_of(m)]++] = m;
    for (std::size_t b = 0; b < nb; ++b) {
      if (start[b + 1] - start[b] > 1) {
        std::sort(sorted.begin() + start[b], sorted.begin() + start[b + 1], mark_before);
      }
    }
    marks_ = std::move(sorted);
  }
  build_index();
}

void MarkSet::build_index() {
  site_offsets_.assign(region_.size() + 1, 0);
  for (const Mark& m : marks_) ++site_offsets_[region_.index_of(m.site) + 1];
  for (std::size_t i = 0; i < region_.size(); ++i) site_offsets_[i + 1] += site_offsets_[i];
  site_marks_.resize(marks_.size());
  std::vector<std::uint32_t> fill(site_offsets_.begin(), site_offsets_.end() - 1);
  for (std::size_t i = 0; i < marks_.size(); ++i) {
    site_marks_[fill[region_.index_of(marks_[i].site)]++] = static_cast<std::uint32_t>(i);
  }
}

std::size_t MarkSet::kept_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(marks_.begin(), marks_.end(), [](const Mark& m) { return m.keep; }));
}

MarkSet MarkSet::with_keep_bits(std::span<const std::uint8_t> keep) const {
  if (keep.size() != marks_.size()) throw std::invalid_argument("keep bit count mismatch");
  MarkSet out(*this);
  for (std::size_t i = 0; i < keep.size(); ++i) out.marks_[i].keep = keep[i] != 0;
  return out;
}

MarkSet MarkSet::restricted(const BoxRegion& window) const {
  if (!region_.contains(window)) throw std::out_of_range("window exceeds mark region");
  std::vector<Mark> sub;
  for (const Mark& m : marks_) {
    if (window.contains(m.site)) sub.push_back(m);
  }
  return MarkSet(window, horizon_, thickening_, std::move(sub));
}

namespace {

void append_site_marks(std::vector<Mark>& out, Site s, double horizon, std::uint32_t thickening,
                       std::uint64_t master_seed, std::uint64_t replicate) {
  const double rate = static_cast<double>(thickening);
  const double keep_p = 1.0 / rate;
  RngStream rng(master_seed, {Purpose::kMarks, replicate, s.x, s.y});
  double t = 0.0;
  std::uint32_t ordinal = 0;
  for (;;) {
    t += rng.exponential(rate);
    if (t > horizon) break;
    Mark m;
    m.site = s;
    m.time = t;
    m.rate_uniform = rng.uniform();
    m.keep = thickening == 1 ? true : rng.bernoulli(keep_p);
    m.ordinal = ordinal++;
    out.push_back(m);
  }
}

}  // namespace

std::vector<Mark> sample_site_marks(Site site, double horizon, std::uint32_t thickening,
                                    std::uint64_t master_seed, std::uint64_t replicate) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (thickening < 1) throw std::invalid_argument("thickening must be >= 1");
  std::vector<Mark> out;
  append_site_marks(out, site, horizon, thickening, master_seed, replicate);
  return out;
}

MarkSet sample_marks(const BoxRegion& region, double horizon, std::uint32_t thickening,
                     std::uint64_t master_seed, std::uint64_t replicate) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (thickening < 1) throw std::invalid_argument("thickening must be >= 1");
  std::vector<Mark> marks;
  marks.reserve(static_cast<std::size_t>(static_cast<double>(region.size()) * thickening * horizon * 1.05) + 16);
  for (std::size_t i = 0; i < region.size(); ++i) {
    append_site_marks(marks, region.site_at(i), horizon, thickening, master_seed, replicate);
  }
  return MarkSet(region, horizon, thickening, std::move(marks));
}

MarkSet thin(const MarkSet& marks) {
  std::vector<Mark> kept;
  kept.reserve(marks.kept_count());
  for (const Mark& m : marks.marks()) {
    if (m.keep) kept.push_back(m);
  }
  return MarkSet(marks.region(), marks.horizon(), 1, std::move(kept));
}

std::vector<std::uint8_t> sample_keep_mask(const MarkSet& marks, std::uint64_t seed,
                                           std::uint64_t replicate) {
  std::vector<std::uint8_t> keep(marks.size(), 0);
  const std::uint32_t k = marks.thickening();
  if (k == 1) {
    std::fill(keep.begin(), keep.end(), 1);
    return keep;
  }
  // Geometric skips over the global order: one draw per kept mark.
  RngStream rng(seed, {Purpose::kKeepResample, replicate, 0, 0});
  const double log_q = std::log1p(-1.0 / static_cast<double>(k));
  std::size_t i = 0;
  while (i < marks.size()) {
    const double gap = std::floor(std::log1p(-rng.uniform()) / log_q);
    if (gap >= static_cast<double>(marks.size() - i)) break;
    i += static_cast<std::size_t>(gap);
    keep[i++] = 1;
  }
  return keep;
}

MarkSet resample_keep_bits(const MarkSet& marks, std::uint64_t seed, std::uint64_t replicate) {
  return marks.with_keep_bits(sample_keep_mask(marks, seed, replicate));
}

}  // namespace spinperc
