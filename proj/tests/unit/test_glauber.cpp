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
#include <cmath>

#include "oracles.hpp"
#include "spinperc/certify.hpp"
#include "spinperc/glauber.hpp"

namespace spinperc {
namespace {

std::array<Spin, 4> spins(int a, int b, int c, int d) {
  return {Spin::from_int(a), Spin::from_int(b), Spin::from_int(c), Spin::from_int(d)};
}

TEST(SBeta, Examples) {
  EXPECT_DOUBLE_EQ(s_beta(spins(1, 1, -1, 1), 0.0), 0.5);
  EXPECT_DOUBLE_EQ(s_beta(spins(1, -1, -1, 1), 3.0), 0.5);
  EXPECT_NEAR(s_beta(spins(1, 1, -1, 1), 1.0), 1.0 / (1.0 + std::exp(-4.0)), 1e-15);
  EXPECT_NEAR(s_beta(spins(1, 1, -1, 1), 1.0), 0.982014, 1e-6);
  EXPECT_EQ(s_beta(spins(1, 1, -1, 1), kInfiniteBeta), 1.0);
  EXPECT_EQ(s_beta(spins(-1, 1, -1, -1), kInfiniteBeta), 0.0);
  EXPECT_EQ(s_beta(spins(-1, 1, -1, 1), kInfiniteBeta), 0.5);
  // Large finite beta stays finite and approaches the limit.
  EXPECT_NEAR(s_beta_sum(4, 400.0), 1.0, 1e-12);
  EXPECT_NEAR(s_beta_sum(-4, 400.0), 0.0, 1e-12);
}

TEST(GBeta, ExamplesAndMonotone) {
  for (double beta : {0.0, 0.3, 2.0, 20.0}) {
    EXPECT_EQ(g_beta(spins(-1, -1, -1, -1), 0.0, beta), Spin::plus());
  }
  EXPECT_EQ(g_beta(spins(1, 1, 1, 1), 0.999999, 0.0), Spin::minus());
  for (double beta : {0.0, 0.5, 1.0, kInfiniteBeta}) {
    for (double u = 0.0; u < 1.0; u += 0.037) {
      for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) {
          if ((a & b) != a) continue;  // a <= b pointwise
          std::array<Spin, 4> za, zb;
          for (int i = 0; i < 4; ++i) {
            za[i] = (a >> i) & 1 ? Spin::plus() : Spin::minus();
            zb[i] = (b >> i) & 1 ? Spin::plus() : Spin::minus();
          }
          EXPECT_LE(g_beta(za, u, beta), g_beta(zb, u, beta));
        }
      }
    }
  }
}

TEST(UpdateTable, DeathMarks) {
  const UpdateTable t0(0.0);
  for (double r = 0.0; r < 1.0; r += 0.01) EXPECT_TRUE(t0.is_death(r));
  const UpdateTable t1(1.0);
  EXPECT_TRUE(t1.is_death(s_beta_sum(-4, 1.0) / 2));
  EXPECT_FALSE(t1.is_death(0.5));
  const UpdateTable tinf(kInfiniteBeta);
  EXPECT_FALSE(tinf.is_death(0.3));
}

TEST(GwOffspring, Values) {
  EXPECT_DOUBLE_EQ(gw_offspring_prob(0.0), 0.0);
  EXPECT_NEAR(gw_offspring_prob(0.05), 1.0 / (1.0 + std::exp(-0.4)) - 1.0 / (1.0 + std::exp(0.4)), 1e-15);
  EXPECT_NEAR(gw_offspring_prob(0.05), 0.197375, 1e-6);
  EXPECT_LT(gw_offspring_prob(0.05), 0.2);
  EXPECT_NEAR(gw_offspring_prob(50.0), 1.0, 1e-12);
  EXPECT_EQ(gw_offspring_prob(kInfiniteBeta), 1.0);
}

struct Realization {
  BoxRegion region;
  SeedField seeds;
  MarkSet marks;
};

Realization realize(std::int32_t side, double horizon, std::uint32_t k, std::uint64_t seed) {
  const BoxRegion r({0, 0}, side, side);
  return {r, sample_seed_field(r, seed), sample_marks(r, horizon, k, seed)};
}

TEST(Evolve, MatchesNaiveSimulation) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const double beta = seed % 3 == 0 ? kInfiniteBeta : 0.4 * static_cast<double>(seed % 5);
    const auto k = static_cast<std::uint32_t>(1 + seed % 3);
    const Realization z = realize(9, 1.5, k, seed);
    const BoundaryCondition bc = static_cast<BoundaryCondition>(seed % 3);
    const GlauberParams p{beta, 1.2, k};
    const SpinField got = evolve(z.seeds, z.marks, 0.5, p, bc, z.region);
    const SpinField want = oracle::naive_evolve(z.seeds, z.marks, 0.5, beta, 1.2, bc);
    EXPECT_EQ(got, want) << "seed " << seed;
  }
}

TEST(Evolve, TrivialCases) {
  const Realization z = realize(12, 2.0, 1, 3);
  const SpinField init = initial_field(z.seeds, 0.37);
  EXPECT_EQ(evolve(z.seeds, z.marks, 0.37, GlauberParams{1.0, 0.0, 1}, BoundaryCondition::kFree, z.region),
            init);
  const SpinField all = evolve(z.seeds, z.marks, 1.0, GlauberParams{kInfiniteBeta, 2.0, 1},
                               BoundaryCondition::kAllPlus, z.region);
  EXPECT_EQ(all.count_plus(), all.size());
  const BoxRegion sub({2, 3}, 4, 5);
  EXPECT_EQ(evolve(z.seeds, z.marks, 0.5, GlauberParams{1.0, 2.0, 1}, BoundaryCondition::kFree, sub),
            evolve(z.seeds, z.marks, 0.5, GlauberParams{1.0, 2.0, 1}, BoundaryCondition::kFree, z.region)
                .restricted(sub));
  EXPECT_THROW(evolve(z.seeds, z.marks, 0.5, GlauberParams{1.0, 3.0, 1}, BoundaryCondition::kFree, z.region),
               std::invalid_argument);
  EXPECT_THROW(evolve(z.seeds, z.marks, 0.5, GlauberParams{1.0, 1.0, 1}, BoundaryCondition::kFree,
                      BoxRegion({0, 0}, 13, 2)),
               std::out_of_range);
  EXPECT_THROW(GlauberParams({-1.0, 1.0, 1}).validate(), std::invalid_argument);
}

TEST(Evolve, MonotoneInRhoAndBoundary) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Realization z = realize(16, 1.0, 1, 100 + seed);
    const GlauberParams p{1.0, 1.0, 1};
    SpinField prev;
    for (double rho = 0.0; rho <= 1.0001; rho += 0.1) {
      const SpinField f = evolve(z.seeds, z.marks, rho, p, BoundaryCondition::kFree, z.region);
      if (prev.size()) EXPECT_TRUE(pointwise_leq(prev, f));
      prev = f;
    }
    const SpinField lo = evolve(z.seeds, z.marks, 0.5, p, BoundaryCondition::kAllMinus, z.region);
    const SpinField mid = evolve(z.seeds, z.marks, 0.5, p, BoundaryCondition::kFree, z.region);
    const SpinField hi = evolve(z.seeds, z.marks, 0.5, p, BoundaryCondition::kAllPlus, z.region);
    EXPECT_TRUE(pointwise_leq(lo, mid));
    EXPECT_TRUE(pointwise_leq(mid, hi));
  }
}

TEST(Evolve, KeepMaskOverride) {
  const Realization z = realize(8, 1.0, 4, 9);
  const GlauberParams p{1.0, 1.0, 4};
  const auto mask = sample_keep_mask(z.marks, 3, 0);
  const SpinField init = initial_field(z.seeds, 0.5);
  EXPECT_EQ(evolve_from(init, z.marks, p, BoundaryCondition::kFree, z.region, mask),
            evolve_from(init, z.marks.with_keep_bits(mask), p, BoundaryCondition::kFree, z.region));
}

TEST(Reaches, Examples) {
  const BoxRegion r({0, 0}, 3, 1);
  const MarkSet none(r, 1.0, 1, {});
  EXPECT_FALSE(reaches({0, 0}, {1, 0}, none, 1.0));
  EXPECT_TRUE(reaches({0, 0}, {0, 0}, none, 1.0));
  const MarkSet two(r, 1.0, 1, {Mark{{0, 0}, 0.2, 0.5, 0, true}, Mark{{1, 0}, 0.7, 0.5, 0, true}});
  EXPECT_TRUE(reaches({0, 0}, {1, 0}, two, 1.0));
  EXPECT_FALSE(reaches({1, 0}, {0, 0}, two, 1.0));
  EXPECT_FALSE(reaches({0, 0}, {1, 0}, two, 0.7));
  EXPECT_FALSE(reaches({0, 0}, {2, 0}, two, 1.0));
  // Unkept marks still count.
  const MarkSet unkept(r, 1.0, 2, {Mark{{0, 0}, 0.2, 0.5, 0, false}, Mark{{1, 0}, 0.7, 0.5, 0, false}});
  EXPECT_TRUE(reaches({0, 0}, {1, 0}, unkept, 1.0));
  EXPECT_FALSE(reaches({0, 0}, {1, 0}, unkept, 1.0, MarkFilter::kKept));
}

TEST(Reaches, MatchesChainEnumeration) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Realization z = realize(5, 1.0, 1 + seed % 2, 500 + seed);
    for (std::size_t i = 0; i < z.region.size(); i += 3) {
      for (std::size_t j = 0; j < z.region.size(); j += 2) {
        const Site x = z.region.site_at(i);
        const Site y = z.region.site_at(j);
        EXPECT_EQ(reaches(x, y, z.marks, 0.9), oracle::chain_reaches(x, y, z.marks, 0.9));
      }
    }
  }
}

TEST(BackwardSupport, TrivialCases) {
  const BoxRegion r({0, 0}, 4, 4);
  const MarkSet none(r, 1.0, 1, {});
  const SupportSet s = backward_support({1, 2}, none, 1.0);
  EXPECT_EQ(s.members, (std::vector<Site>{Site{1, 2}}));
  EXPECT_EQ(s.radius(), 0);
  const MarkSet m = sample_marks(r, 1.0, 1, 4);
  EXPECT_EQ(backward_support({1, 2}, m, 0.0).members, (std::vector<Site>{Site{1, 2}}));
}

TEST(BackwardSupport, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::int32_t side = 4 + static_cast<std::int32_t>(seed % 3);
    const Realization z = realize(side, 1.0, 1 + seed % 3, 900 + seed);
    for (std::size_t i = 0; i < z.region.size(); ++i) {
      const Site x = z.region.site_at(i);
      const SupportSet s = backward_support(x, z.marks, 0.8);
      EXPECT_EQ(s.anchor, x);
      EXPECT_TRUE(s.contains(x));
      EXPECT_EQ(s.members, oracle::chain_support(x, z.marks, 0.8)) << "seed " << seed << " site " << i;
      const auto dep = dependency_set(x, z.marks, 0.8);
      for (Site y : s.members) EXPECT_NE(std::find(dep.begin(), dep.end(), y), dep.end());
    }
  }
}

TEST(Arrival, ConsistentWithReaches) {
  const Realization z = realize(6, 1.0, 1, 31);
  const Site from{2, 3};
  const auto arrival = earliest_arrival(from, z.marks, 1.0);
  for (std::size_t j = 0; j < z.region.size(); ++j) {
    const Site y = z.region.site_at(j);
    if (y == from) continue;
    EXPECT_EQ(std::isfinite(arrival[j]), reaches(from, y, z.marks, 1.0));
  }
}

// Changing an initial spin outside the dependency set never changes sigma_t(x).
TEST(DependencySet, SpinsOutsideDoNotMatter) {
  const Realization z = realize(7, 1.0, 1, 77);
  const GlauberParams p{0.8, 1.0, 1};
  const Site x{3, 3};
  const auto dep = dependency_set(x, z.marks, 1.0);
  const SpinField base = initial_field(z.seeds, 0.5);
  const Spin v = evolve_from(base, z.marks, p, BoundaryCondition::kFree, z.region).at(x);
  for (std::size_t i = 0; i < z.region.size(); ++i) {
    const Site y = z.region.site_at(i);
    if (std::find(dep.begin(), dep.end(), y) != dep.end()) continue;
    SpinField f = base;
    f[i] = -f[i];
    EXPECT_EQ(evolve_from(f, z.marks, p, BoundaryCondition::kFree, z.region).at(x), v);
  }
}

TEST(BackwardExplore, AgreesWithEvolve) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const double beta = seed % 2 ? kInfiniteBeta : 0.5;
    const Realization z = realize(24, 1.0, 1, 2000 + seed);
    const GlauberParams p{beta, 1.0, 1};
    const SpinField f = evolve(z.seeds, z.marks, 0.5, p, BoundaryCondition::kFree, z.region);
    for (std::int32_t x = 8; x < 16; ++x) {
      for (std::int32_t y = 8; y < 16; ++y) {
        try {
          EXPECT_EQ(backward_explore_value({x, y}, z.marks, z.seeds, 0.5, p), f.at({x, y}));
          ++checked;
        } catch (const SupportEscaped&) {
        }
      }
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(BackwardExplore, TrivialCasesAndEscape) {
  const Realization z = realize(10, 1.0, 1, 5);
  // All +1 is absorbing at beta = infinity; explorations that stay inside see only +1.
  int determined = 0;
  for (std::size_t i = 0; i < z.region.size(); ++i) {
    try {
      EXPECT_EQ(backward_explore_value(z.region.site_at(i), z.marks, z.seeds, 1.0,
                                       GlauberParams{kInfiniteBeta, 1.0, 1}),
                Spin::plus());
      ++determined;
    } catch (const SupportEscaped&) {
    }
  }
  EXPECT_GT(determined, 0);
  // beta = 0: every mark is a death mark, so nothing outside a single site is read.
  const BoxRegion one({0, 0}, 1, 1);
  const MarkSet single = sample_marks(one, 3.0, 1, 8);
  const SeedField s1 = sample_seed_field(one, 8);
  EXPECT_NO_THROW(backward_explore_value({0, 0}, single, s1, 0.5, GlauberParams{0.0, 3.0, 1}));
  // A non-death mark on a 1x1 region needs neighbors outside.
  const MarkSet live(one, 1.0, 1, {Mark{{0, 0}, 0.5, 0.5, 0, true}});
  EXPECT_THROW(backward_explore_value({0, 0}, live, s1, 0.5, GlauberParams{1.0, 1.0, 1}),
               SupportEscaped);
}

TEST(MinRhoMap, MatchesBisection) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Realization z = realize(8, 1.0, 1, 300 + seed);
    const GlauberParams p{seed % 2 ? kInfiniteBeta : 1.5, 1.0, 1};
    const BoundaryCondition bc = static_cast<BoundaryCondition>(seed % 3);
    const ThresholdField t = min_rho_map(z.seeds, z.marks, p, bc, z.region);
    for (std::size_t i = 0; i < z.region.size(); ++i) {
      const Site x = z.region.site_at(i);
      const double v = t.values[i];
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
      EXPECT_NEAR(v, oracle::bisect_min_rho(z.seeds, z.marks, p, bc, x), std::ldexp(1.0, -19));
      const BoxRegion one(x, 1, 1);
      const double eps = std::ldexp(1.0, -19);
      if (v + eps <= 1.0) EXPECT_TRUE(evolve(z.seeds, z.marks, v + eps, p, bc, one)[0].is_plus());
      if (v - eps >= 0.0) EXPECT_FALSE(evolve(z.seeds, z.marks, v - eps, p, bc, one)[0].is_plus());
    }
  }
}

TEST(MinRhoMap, UnmarkedSitesAndTauZero) {
  const Realization z = realize(10, 0.3, 1, 41);
  const GlauberParams p{1.0, 0.3, 1};
  const ThresholdField t = min_rho_map(z.seeds, z.marks, p, BoundaryCondition::kFree, z.region);
  for (std::size_t i = 0; i < z.region.size(); ++i) {
    if (z.marks.marks_at(i).empty()) EXPECT_EQ(t.values[i], z.seeds[i]);
  }
  const ThresholdField t0 =
      min_rho_map(z.seeds, z.marks, GlauberParams{1.0, 0.0, 1}, BoundaryCondition::kFree, z.region);
  for (std::size_t i = 0; i < z.region.size(); ++i) EXPECT_EQ(t0.values[i], z.seeds[i]);
  const ThresholdField again = min_rho_map(z.seeds, z.marks, p, BoundaryCondition::kFree, z.region);
  EXPECT_EQ(again.values, t.values);
}

}  // namespace
}  // namespace spinperc
