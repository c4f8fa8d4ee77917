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

#include <gtest/gtest.h>

#include <algorithm>

#include "spinperc/lattice.hpp"

namespace spinperc {
namespace {

TEST(Neighbors, FixedOrderAtOrigin) {
  const auto n = neighbors4({0, 0});
  EXPECT_EQ(n[0], (Site{1, 0}));
  EXPECT_EQ(n[1], (Site{0, 1}));
  EXPECT_EQ(n[2], (Site{-1, 0}));
  EXPECT_EQ(n[3], (Site{0, -1}));
}

TEST(Neighbors, TranslationInvariant) {
  const Site s{5, -3};
  const auto a = neighbors4({0, 0});
  const auto b = neighbors4(s);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(b[i], a[i] + s);
}

TEST(Neighbors, DistancesAndInclusion) {
  for (int x = -3; x <= 3; ++x) {
    for (int y = -3; y <= 3; ++y) {
      const Site s{x, y};
      const auto n4 = neighbors4(s);
      const auto n8 = neighbors8(s);
      EXPECT_EQ(n8.size(), 8u);
      for (Site n : n4) {
        EXPECT_EQ(l1_distance(s, n), 1);
        EXPECT_NE(std::find(n8.begin(), n8.end(), n), n8.end());
        const auto back = neighbors4(n);
        EXPECT_NE(std::find(back.begin(), back.end(), s), back.end());
      }
      for (Site n : n8) {
        EXPECT_EQ(linf_distance(s, n), 1);
        const auto back = neighbors8(n);
        EXPECT_NE(std::find(back.begin(), back.end(), s), back.end());
      }
      std::vector<Site> sorted(n8.begin(), n8.end());
      std::sort(sorted.begin(), sorted.end());
      EXPECT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end());
    }
  }
}

TEST(BoxRegion, IndexingRoundTrip) {
  const BoxRegion b({-2, 3}, 5, 4);
  EXPECT_EQ(b.size(), 20u);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Site s = b.site_at(i);
    EXPECT_TRUE(b.contains(s));
    EXPECT_EQ(b.index_of(s), i);
  }
  EXPECT_FALSE(b.contains(Site{-3, 3}));
  EXPECT_FALSE(b.contains(Site{3, 3}));
  EXPECT_FALSE(b.contains(Site{0, 7}));
  EXPECT_THROW(b.index_of_checked({10, 10}), std::out_of_range);
}

TEST(BoxRegion, RejectsEmpty) {
  EXPECT_THROW(BoxRegion({0, 0}, 0, 3), std::invalid_argument);
  EXPECT_THROW(BoxRegion({0, 0}, 3, -1), std::invalid_argument);
}

TEST(BoxRegion, CrossingBoxAndBall) {
  const BoxRegion c = BoxRegion::crossing_box(3, 1);
  EXPECT_EQ(c.width(), 4);
  EXPECT_EQ(c.height(), 2);
  EXPECT_EQ(c.origin(), (Site{0, 0}));
  const BoxRegion b = BoxRegion::ball({1, 1}, 2);
  EXPECT_EQ(b.x_min(), -1);
  EXPECT_EQ(b.y_max(), 3);
  EXPECT_TRUE(b.expanded(1).contains(b));
  EXPECT_EQ(b.expanded(1), BoxRegion::ball({1, 1}, 3));
  EXPECT_EQ(BoxRegion({1, 2}, 3, 5).transposed(), BoxRegion({2, 1}, 5, 3));
}

TEST(Boundary, SmallCases) {
  EXPECT_EQ(boundary(BoxRegion({4, 4}, 1, 1)).size(), 1u);
  const auto b3 = boundary(BoxRegion({0, 0}, 3, 3));
  EXPECT_EQ(b3.size(), 8u);
  EXPECT_EQ(std::find(b3.begin(), b3.end(), Site{1, 1}), b3.end());
  for (int n = 2; n <= 6; ++n) {
    for (int m = 2; m <= 6; ++m) {
      EXPECT_EQ(boundary(BoxRegion({0, 0}, n, m)).size(), static_cast<std::size_t>(2 * n + 2 * m - 4));
    }
  }
  for (int n = 1; n <= 5; ++n) {
    EXPECT_EQ(boundary(BoxRegion::ball({0, 0}, n)).size(), static_cast<std::size_t>(8 * n));
  }
}

TEST(Spin, Basics) {
  EXPECT_EQ(Spin::plus().value(), 1);
  EXPECT_EQ((-Spin::plus()), Spin::minus());
  EXPECT_EQ(-(-Spin::minus()), Spin::minus());
  EXPECT_THROW(Spin::from_int(0), std::invalid_argument);
  EXPECT_LT(Spin::minus(), Spin::plus());
}

TEST(SpinField, OrderAndTransforms) {
  const BoxRegion r({0, 0}, 3, 2);
  SpinField f(r);
  SpinField g(r, Spin::plus());
  EXPECT_TRUE(pointwise_leq(f, g));
  EXPECT_FALSE(pointwise_leq(g, f));
  f.set({1, 1}, Spin::plus());
  EXPECT_TRUE(pointwise_leq(f, g));
  EXPECT_EQ(f.count_plus(), 1u);
  EXPECT_EQ(f.negated().count_plus(), 5u);
  const SpinField t = f.transposed();
  EXPECT_EQ(t.region(), r.transposed());
  EXPECT_EQ(t.at({1, 1}), Spin::plus());
  EXPECT_EQ(t.transposed(), f);
  const SpinField sub = f.restricted(BoxRegion({1, 1}, 2, 1));
  EXPECT_EQ(sub.at({1, 1}), Spin::plus());
  EXPECT_EQ(sub.size(), 2u);
  // Antisymmetry.
  SpinField h = f;
  EXPECT_TRUE(pointwise_leq(f, h) && pointwise_leq(h, f));
  EXPECT_EQ(f, h);
  EXPECT_THROW(pointwise_leq(f, SpinField(BoxRegion({0, 0}, 2, 2))), std::invalid_argument);
}

}  // namespace
}  // namespace spinperc
