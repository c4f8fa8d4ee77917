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

#include <random>

#include "oracles.hpp"
#include "spinperc/geometry.hpp"

namespace spinperc {
namespace {

SpinField from_rows(const std::vector<std::string>& rows) {
  // rows[0] is the top row; '+' and '-'.
  const auto h = static_cast<std::int32_t>(rows.size());
  const auto w = static_cast<std::int32_t>(rows[0].size());
  SpinField f(BoxRegion({0, 0}, w, h));
  for (std::int32_t y = 0; y < h; ++y) {
    for (std::int32_t x = 0; x < w; ++x) {
      f.set({x, y}, rows[static_cast<std::size_t>(h - 1 - y)][static_cast<std::size_t>(x)] == '+'
                        ? Spin::plus()
                        : Spin::minus());
    }
  }
  return f;
}

SpinField random_field(const BoxRegion& r, double p, std::mt19937_64& gen) {
  std::bernoulli_distribution coin(p);
  SpinField f(r);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = coin(gen) ? Spin::plus() : Spin::minus();
  return f;
}

TEST(UnionFind, Basics) {
  UnionFind uf(6);
  EXPECT_FALSE(uf.same(0, 1));
  EXPECT_TRUE(uf.unite(0, 1));
  EXPECT_FALSE(uf.unite(1, 0));
  uf.unite(2, 3);
  uf.unite(1, 3);
  EXPECT_TRUE(uf.same(0, 2));
  EXPECT_FALSE(uf.same(0, 5));
}

TEST(Clusters, SimpleFields) {
  const BoxRegion r({0, 0}, 6, 5);
  const auto plus = label_clusters(SpinField(r, Spin::plus()), Connectivity::kPlus4);
  for (auto l : plus.labels) EXPECT_EQ(l, 0u);
  SpinField checker(r);
  for (std::size_t i = 0; i < checker.size(); ++i) {
    const Site s = r.site_at(i);
    checker[i] = (s.x + s.y) % 2 == 0 ? Spin::plus() : Spin::minus();
  }
  const auto cp = label_clusters(checker, Connectivity::kPlus4);
  for (std::size_t i = 0; i < cp.labels.size(); ++i) EXPECT_EQ(cp.labels[i], i);
  const auto cm = label_clusters(checker, Connectivity::kMinus8);
  for (std::size_t i = 0; i < cm.labels.size(); ++i) {
    if (!checker[i].is_plus()) EXPECT_EQ(cm.labels[i], 1u);
  }
}

TEST(Clusters, MatchDfsOracle) {
  std::mt19937_64 gen(1);
  for (int rep = 0; rep < 50; ++rep) {
    const BoxRegion r({-3, 2}, 16, 16);
    const SpinField f = random_field(r, 0.3 + 0.01 * rep, gen);
    const auto g = oracle::grid_of(f);
    for (bool plus : {true, false}) {
      const auto labels = label_clusters(f, plus ? Connectivity::kPlus4 : Connectivity::kMinus8).labels;
      const auto comp = oracle::dfs_components(g, plus);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (comp[i] < 0) {
          EXPECT_EQ(labels[i], i);
          continue;
        }
        EXPECT_LE(labels[i], i);
        for (std::size_t j = 0; j < labels.size(); j += 7) {
          if (comp[j] < 0) continue;
          EXPECT_EQ(labels[i] == labels[j], comp[i] == comp[j]);
        }
      }
    }
  }
}

TEST(Crossing, Examples) {
  const BoxRegion box = BoxRegion::crossing_box(4, 3);
  EXPECT_TRUE(plus_crossing(SpinField(box, Spin::plus()), box));
  SpinField f(box, Spin::plus());
  for (std::int32_t y = 0; y <= 3; ++y) f.set({2, y}, Spin::minus());
  EXPECT_FALSE(plus_crossing(f, box));
  SpinField row(box);
  for (std::int32_t x = 0; x <= 4; ++x) row.set({x, 1}, Spin::plus());
  EXPECT_TRUE(plus_crossing(row, box));
  EXPECT_TRUE(star_minus_crossing(SpinField(box), box));
  EXPECT_FALSE(star_minus_crossing(SpinField(box, Spin::plus()), box));
  const SpinField stair = from_rows({"+++-+", "++-++", "+-+++", "-++++"});
  EXPECT_TRUE(star_minus_crossing(stair.transposed(), stair.transposed().region()) ||
              crosses(stair, stair.region(), Connectivity::kMinus8, Axis::kVertical));
  EXPECT_TRUE(crosses(stair, stair.region(), Connectivity::kMinus8, Axis::kVertical));
  const SpinField diag = from_rows({"---+", "--+-", "-+--", "+---"});
  EXPECT_FALSE(plus_crossing(diag, diag.region()));
  EXPECT_TRUE(crosses(diag.negated(), diag.region(), Connectivity::kMinus8));
}

TEST(Crossing, SubBoxOfLargerField) {
  const SpinField f = from_rows({"-----", "-+++-", "-----"});
  EXPECT_FALSE(plus_crossing(f, f.region()));
  EXPECT_TRUE(plus_crossing(f, BoxRegion({1, 1}, 3, 1)));
  EXPECT_THROW(plus_crossing(f, BoxRegion({3, 0}, 4, 1)), std::out_of_range);
}

TEST(Crossing, MatchesDfsOracleAndMonotone) {
  std::mt19937_64 gen(2);
  for (int rep = 0; rep < 200; ++rep) {
    const BoxRegion r({0, 0}, 3 + rep % 9, 3 + rep % 7);
    const SpinField f = random_field(r, 0.5 + 0.1 * ((rep % 5) - 2), gen);
    const auto g = oracle::grid_of(f);
    EXPECT_EQ(plus_crossing(f, r), oracle::dfs_crossing(g, true));
    EXPECT_EQ(star_minus_crossing(f, r), oracle::dfs_crossing(g, false));
    EXPECT_EQ(crosses(f, r, Connectivity::kPlus4, Axis::kVertical), oracle::dfs_vertical_crossing(g, true));
    EXPECT_TRUE(check_duality(f, r));
    SpinField up = f;
    for (std::size_t i = 0; i < up.size(); i += 5) up[i] = Spin::plus();
    if (plus_crossing(f, r)) EXPECT_TRUE(plus_crossing(up, r));
    if (star_minus_crossing(up, r)) EXPECT_TRUE(star_minus_crossing(f, r));
  }
}

TEST(Duality, Exhaustive4x4) {
  const BoxRegion box = BoxRegion::crossing_box(3, 3);
  for (std::uint32_t bits = 0; bits < (1U << 16); ++bits) {
    SpinField f(box);
    for (std::size_t i = 0; i < 16; ++i) f[i] = (bits >> i) & 1U ? Spin::plus() : Spin::minus();
    ASSERT_TRUE(check_duality(f, box)) << bits;
  }
}

TEST(ArmEvent, Examples) {
  const BoxRegion r = BoxRegion::ball({0, 0}, 6);
  EXPECT_TRUE(arm_event(SpinField(r, Spin::plus()), {0, 0}, 1, 5));
  EXPECT_FALSE(arm_event(SpinField(r), {0, 0}, 1, 5));
  SpinField ray(r);
  for (std::int32_t x = 0; x <= 6; ++x) ray.set({x, 0}, Spin::plus());
  EXPECT_TRUE(arm_event(ray, {0, 0}, 1, 5));
  EXPECT_TRUE(arm_event(ray, {0, 0}, 0, 5));
  SpinField short_ray(r);
  for (std::int32_t x = 0; x <= 5; ++x) short_ray.set({x, 0}, Spin::plus());
  EXPECT_FALSE(arm_event(short_ray, {0, 0}, 1, 5));
  EXPECT_THROW(arm_event(ray, {0, 0}, 1, 6), std::out_of_range);
  EXPECT_THROW(arm_event(ray, {0, 0}, 3, 3), std::invalid_argument);
}

// Arm(m, n) implies Arm(m', n') whenever m <= m' < n' <= n.
TEST(ArmEvent, NestedAnnuli) {
  std::mt19937_64 gen(3);
  const BoxRegion r = BoxRegion::ball({0, 0}, 9);
  for (int rep = 0; rep < 300; ++rep) {
    const SpinField f = random_field(r, 0.62, gen);
    for (int m = 0; m < 8; ++m) {
      for (int n = m + 1; n <= 8; ++n) {
        if (!arm_event(f, {0, 0}, m, n)) continue;
        for (int m2 = m; m2 < n; ++m2) {
          for (int n2 = m2 + 1; n2 <= n; ++n2) EXPECT_TRUE(arm_event(f, {0, 0}, m2, n2));
        }
      }
    }
  }
}

TEST(Minimax, MatchesThresholdScan) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const BoxRegion box({0, 0}, 1 + rep % 8, 1 + rep % 5);
    std::vector<double> v(box.size());
    for (double& x : v) x = u(gen);
    if (rep % 4 == 0) v[0] = std::numeric_limits<double>::infinity();
    const double t = minimax_crossing(v, box);
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    double expect = std::numeric_limits<double>::infinity();
    for (double cut : sorted) {
      SpinField f(box);
      for (std::size_t i = 0; i < v.size(); ++i) f[i] = v[i] <= cut ? Spin::plus() : Spin::minus();
      if (plus_crossing(f, box)) {
        expect = cut;
        break;
      }
    }
    EXPECT_EQ(t, expect);
  }
}

}  // namespace
}  // namespace spinperc
