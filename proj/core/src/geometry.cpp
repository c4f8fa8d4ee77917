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

#include "spinperc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace spinperc {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t a) noexcept {
  while (parent_[a] != a) {
    parent_[a] = parent_[parent_[a]];
    a = parent_[a];
  }
  return a;
}

bool UnionFind::unite(std::size_t a, std::size_t b) noexcept {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_size_[a] < rank_size_[b]) std::swap(a, b);
  parent_[b] = a;
  rank_size_[a] += rank_size_[b];
  return true;
}

namespace {

Spin spin_of(Connectivity kind) {
  return kind == Connectivity::kPlus4 ? Spin::plus() : Spin::minus();
}

std::span<const Site> steps_of(Connectivity kind) {
  if (kind == Connectivity::kPlus4) return kSteps4;
  return kSteps8;
}

// Joins every pair of adjacent matching sites of `box`, with local row-major indices.
void join_box(const SpinField& field, const BoxRegion& box, Connectivity kind, UnionFind& uf) {
  const Spin want = spin_of(kind);
  const auto steps = steps_of(kind);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Site s = box.site_at(i);
    if (field.at(s) != want) continue;
    for (Site d : steps) {
      // Each undirected edge once: only steps pointing "forward" in row-major order.
      if (d.y < 0 || (d.y == 0 && d.x < 0)) continue;
      const Site n = s + d;
      if (!box.contains(n) || field.at(n) != want) continue;
      uf.unite(i, box.index_of(n));
    }
  }
}

}  // namespace

ClusterLabels label_clusters(const SpinField& field, Connectivity kind) {
  const BoxRegion& region = field.region();
  UnionFind uf(region.size());
  join_box(field, region, kind, uf);
  ClusterLabels out{region, kind, std::vector<std::uint32_t>(region.size())};
  std::vector<std::uint32_t> smallest(region.size(), std::numeric_limits<std::uint32_t>::max());
  for (std::size_t i = 0; i < region.size(); ++i) {
    auto& s = smallest[uf.find(i)];
    s = std::min(s, static_cast<std::uint32_t>(i));
  }
  for (std::size_t i = 0; i < region.size(); ++i) out.labels[i] = smallest[uf.find(i)];
  return out;
}

bool crosses(const SpinField& field, const BoxRegion& box, Connectivity kind, Axis axis) {
  if (!field.region().contains(box)) throw std::out_of_range("box exceeds field region");
  const std::size_t n = box.size();
  const std::size_t lo = n;
  const std::size_t hi = n + 1;
  UnionFind uf(n + 2);
  join_box(field, box, kind, uf);
  const Spin want = spin_of(kind);
  for (std::size_t i = 0; i < n; ++i) {
    const Site s = box.site_at(i);
    if (field.at(s) != want) continue;
    const std::int32_t c = axis == Axis::kHorizontal ? s.x - box.x_min() : s.y - box.y_min();
    const std::int32_t last = axis == Axis::kHorizontal ? box.width() - 1 : box.height() - 1;
    if (c == 0) uf.unite(i, lo);
    if (c == last) uf.unite(i, hi);
  }
  return uf.same(lo, hi);
}

bool check_duality(const SpinField& field, const BoxRegion& box) {
  const bool plus = crosses(field, box, Connectivity::kPlus4, Axis::kHorizontal);
  const bool minus = crosses(field, box, Connectivity::kMinus8, Axis::kVertical);
  return plus != minus;
}

bool arm_event(const SpinField& field, Site center, std::int32_t m, std::int32_t n) {
  if (m < 0 || m >= n) throw std::invalid_argument("arm event needs 0 <= m < n");
  const BoxRegion outer = BoxRegion::ball(center, n + 1);
  if (!field.region().contains(outer)) throw std::out_of_range("annulus exceeds field region");
  std::vector<std::uint8_t> seen(outer.size(), 0);
  std::deque<Site> queue;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const Site s = outer.site_at(i);
    if (linf_distance(s, center) == m && field.at(s).is_plus()) {
      seen[i] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const Site s = queue.front();
    queue.pop_front();
    if (linf_distance(s, center) == n + 1) return true;
    for (Site d : kSteps4) {
      const Site t = s + d;
      if (!outer.contains(t) || linf_distance(t, center) < m) continue;
      const std::size_t j = outer.index_of(t);
      if (seen[j] != 0 || !field.at(t).is_plus()) continue;
      seen[j] = 1;
      queue.push_back(t);
    }
  }
  return false;
}

double minimax_crossing(std::span<const double> values, const BoxRegion& box) {
  const std::size_t n = box.size();
  if (values.size() != n) throw std::invalid_argument("value count does not match box");
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });
  const std::size_t left = n;
  const std::size_t right = n + 1;
  UnionFind uf(n + 2);
  std::vector<std::uint8_t> open(n, 0);
  const auto w = static_cast<std::size_t>(box.width());
  const auto h = static_cast<std::size_t>(box.height());
  for (std::uint32_t i : order) {
    if (std::isinf(values[i]) && values[i] > 0) break;
    open[i] = 1;
    const std::size_t x = i % w;
    const std::size_t y = i / w;
    if (x == 0) uf.unite(i, left);
    if (x + 1 == w) uf.unite(i, right);
    if (x + 1 < w && open[i + 1]) uf.unite(i, i + 1);
    if (x > 0 && open[i - 1]) uf.unite(i, i - 1);
    if (y + 1 < h && open[i + w]) uf.unite(i, i + w);
    if (y > 0 && open[i - w]) uf.unite(i, i - w);
    if (uf.same(left, right)) return values[i];
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace spinperc
