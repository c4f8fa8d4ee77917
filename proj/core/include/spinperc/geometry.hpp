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
#include <span>
#include <vector>

#include "spinperc/lattice.hpp"

namespace spinperc {

/// Disjoint sets with union by size and path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t a) noexcept;
  /// Returns false if a and b were already joined.
  bool unite(std::size_t a, std::size_t b) noexcept;
  bool same(std::size_t a, std::size_t b) noexcept { return find(a) == find(b); }
  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint32_t> rank_size_;
};

/// +1 sites under nearest-neighbor adjacency, or -1 sites under *-adjacency.
enum class Connectivity { kPlus4, kMinus8 };

enum class Axis { kHorizontal, kVertical };

struct ClusterLabels {
  BoxRegion region;
  Connectivity kind = Connectivity::kPlus4;
  /// Smallest row-major index of the site's cluster. Sites of the other spin are singletons.
  std::vector<std::uint32_t> labels;

  std::uint32_t at(Site s) const { return labels.at(region.index_of_checked(s)); }
};

ClusterLabels label_clusters(const SpinField& field, Connectivity kind);

/// Crossing of `box` between its two opposite sides along `axis` by sites of the
/// connectivity's spin, using paths inside the box. Side sites must carry the spin.
bool crosses(const SpinField& field, const BoxRegion& box, Connectivity kind,
             Axis axis = Axis::kHorizontal);

/// Left-right +1 nearest-neighbor crossing of box.
inline bool plus_crossing(const SpinField& field, const BoxRegion& box) {
  return crosses(field, box, Connectivity::kPlus4, Axis::kHorizontal);
}

/// Left-right -1 *-crossing of box.
inline bool star_minus_crossing(const SpinField& field, const BoxRegion& box) {
  return crosses(field, box, Connectivity::kMinus8, Axis::kHorizontal);
}

/// Exactly one of {left-right +1 crossing, bottom-top -1 *-crossing} of box holds.
bool check_duality(const SpinField& field, const BoxRegion& box);

/// A +1 nearest-neighbor path from a site at l-infinity distance m from center to a site
/// at distance n + 1, through sites at distances in [m, n + 1]. Needs B(center, n+1) in
/// the field's region and 0 <= m < n.
bool arm_event(const SpinField& field, Site center, std::int32_t m, std::int32_t n);

/// min over left-right paths of the box of the max value along the path, where `values`
/// holds one number per box site in row-major order. Returns +infinity if every path
/// meets an infinite value.
double minimax_crossing(std::span<const double> values, const BoxRegion& box);

}  // namespace spinperc
