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

#include <cmath>
#include <map>

#include "spinperc/random_fields.hpp"
#include "spinperc/stats.hpp"

namespace spinperc {
namespace {

TEST(SeedField, DeterministicAndPerSite) {
  const BoxRegion a({0, 0}, 20, 20);
  const BoxRegion b({10, 5}, 20, 20);
  const SeedField fa = sample_seed_field(a, 123);
  EXPECT_EQ(fa, sample_seed_field(a, 123));
  const SeedField fb = sample_seed_field(b, 123);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Site s = a.site_at(i);
    if (b.contains(s)) EXPECT_EQ(fa.at(s), fb.at(s));
  }
  EXPECT_NE(sample_seed_field(a, 124), fa);
  EXPECT_NE(sample_seed_field(a, 123, 1), fa);
}

TEST(SeedField, MeanOfLargeField) {
  const SeedField f = sample_seed_field(BoxRegion({0, 0}, 256, 256), 77);
  double sum = 0;
  for (double u : f.uniforms()) {
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 65536.0, 0.5, 0.01);
}

TEST(SpinFromSeed, Threshold) {
  EXPECT_EQ(spin_from_seed(0.3, 0.5), Spin::plus());
  EXPECT_EQ(spin_from_seed(0.5, 0.5), Spin::minus());
  for (double u : {0.0, 0.2, 0.999999}) {
    EXPECT_EQ(spin_from_seed(u, 0.0), Spin::minus());
    EXPECT_EQ(spin_from_seed(u, 1.0), Spin::plus());
  }
  for (double u = 0.0; u < 1.0; u += 0.07) {
    for (double r = 0.0; r < 1.0; r += 0.05) {
      EXPECT_LE(spin_from_seed(u, r), spin_from_seed(u, r + 0.05));
    }
  }
}

TEST(MarkSet, CountWithinPoissonRange) {
  const MarkSet m = sample_marks(BoxRegion({0, 0}, 64, 64), 1.0, 1, 5);
  EXPECT_NEAR(static_cast<double>(m.size()), 4096.0, 4 * 64.0);
}

TEST(MarkSet, SortedAndIndexed) {
  const BoxRegion r({-3, -3}, 7, 7);
  const MarkSet m = sample_marks(r, 2.0, 3, 8);
  for (std::size_t i = 1; i < m.size(); ++i) EXPECT_TRUE(mark_before(m[i - 1], m[i]));
  std::size_t total = 0;
  for (std::size_t s = 0; s < r.size(); ++s) {
    const auto idx = m.marks_at(s);
    total += idx.size();
    for (std::size_t j = 0; j < idx.size(); ++j) {
      EXPECT_EQ(m[idx[j]].site, r.site_at(s));
      EXPECT_EQ(m[idx[j]].ordinal, j);
      if (j) EXPECT_LT(m[idx[j - 1]].time, m[idx[j]].time);
    }
  }
  EXPECT_EQ(total, m.size());
  for (const Mark& mk : m.marks()) {
    EXPECT_GE(mk.time, 0.0);
    EXPECT_LE(mk.time, 2.0);
    EXPECT_GE(mk.rate_uniform, 0.0);
    EXPECT_LT(mk.rate_uniform, 1.0);
  }
}

TEST(MarkSet, KeepFraction) {
  const MarkSet m = sample_marks(BoxRegion({0, 0}, 50, 50), 2.0, 8, 10);
  const double n = static_cast<double>(m.size());
  const double p = static_cast<double>(m.kept_count()) / n;
  EXPECT_NEAR(p, 1.0 / 8, 3 * std::sqrt((1.0 / 8) * (7.0 / 8) / n));
}

TEST(MarkSet, OverlapAndHorizonConsistency) {
  const BoxRegion a({0, 0}, 10, 10);
  const BoxRegion b({5, 5}, 10, 10);
  const MarkSet ma = sample_marks(a, 1.0, 2, 3);
  const MarkSet mb = sample_marks(b, 1.0, 2, 3);
  const BoxRegion shared({5, 5}, 5, 5);
  EXPECT_EQ(ma.restricted(shared).marks().size(), mb.restricted(shared).marks().size());
  const auto ra = ma.restricted(shared);
  const auto rb = mb.restricted(shared);
  for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(ra[i], rb[i]);
  // A longer horizon extends a shorter one.
  const MarkSet longer = sample_marks(a, 3.0, 2, 3);
  std::vector<Mark> prefix;
  for (const Mark& mk : longer.marks()) {
    if (mk.time <= 1.0) prefix.push_back(mk);
  }
  ASSERT_EQ(prefix.size(), ma.size());
  for (std::size_t i = 0; i < prefix.size(); ++i) EXPECT_EQ(prefix[i], ma[i]);
  // Single-site sampler agrees.
  const Site s{3, 4};
  const auto one = sample_site_marks(s, 1.0, 2, 3, 0);
  const auto idx = ma.marks_at(a.index_of(s));
  ASSERT_EQ(one.size(), idx.size());
  for (std::size_t j = 0; j < one.size(); ++j) EXPECT_EQ(one[j], ma[idx[j]]);
}

TEST(MarkSet, RejectsBadArguments) {
  EXPECT_THROW(sample_marks(BoxRegion({0, 0}, 2, 2), 0.0, 1, 1), std::invalid_argument);
  EXPECT_THROW(sample_marks(BoxRegion({0, 0}, 2, 2), 1.0, 0, 1), std::invalid_argument);
  EXPECT_THROW(MarkSet(BoxRegion({0, 0}, 2, 2), 1.0, 1, {Mark{{5, 5}, 0.5, 0.5, 0, true}}),
               std::invalid_argument);
}

TEST(Thin, IdentityEmptyAndSubset) {
  const BoxRegion r({0, 0}, 8, 8);
  const MarkSet k1 = sample_marks(r, 1.0, 1, 4);
  EXPECT_EQ(thin(k1), k1);
  const MarkSet empty(r, 1.0, 1, {});
  EXPECT_TRUE(thin(empty).empty());
  const MarkSet k8 = sample_marks(r, 1.0, 8, 4);
  const MarkSet t = thin(k8);
  EXPECT_EQ(t.thickening(), 1u);
  EXPECT_EQ(t.size(), k8.kept_count());
  std::size_t j = 0;
  for (const Mark& mk : k8.marks()) {
    if (!mk.keep) continue;
    EXPECT_EQ(t[j].site, mk.site);
    EXPECT_EQ(t[j].time, mk.time);
    EXPECT_EQ(t[j].rate_uniform, mk.rate_uniform);
    ++j;
  }
}

// Kept marks of a k-thickened process form a rate-1 process: the first kept mark of a site
// is Exp(1), truncated at the horizon.
TEST(Thin, FirstKeptMarkIsExponential) {
  const BoxRegion r({0, 0}, 100, 100);
  const double horizon = 10.0;
  const MarkSet t = thin(sample_marks(r, horizon, 4, 21));
  std::vector<double> first;
  for (std::size_t s = 0; s < r.size(); ++s) {
    const auto at = t.marks_at(s);
    if (!at.empty()) first.push_back(t[at.front()].time);
  }
  ASSERT_GE(first.size(), 9990u);
  const double norm = -std::expm1(-horizon);
  const double d = ks_statistic(first, [&](double x) { return x <= 0 ? 0.0 : -std::expm1(-x) / norm; });
  EXPECT_GT(ks_pvalue(d, first.size()), 0.001);
}

TEST(KeepMask, ResampleChangesOnlyKeepBits) {
  const MarkSet m = sample_marks(BoxRegion({0, 0}, 10, 10), 1.0, 4, 2);
  const auto mask = sample_keep_mask(m, 99, 0);
  EXPECT_EQ(mask, sample_keep_mask(m, 99, 0));
  const MarkSet r = resample_keep_bits(m, 99, 0);
  ASSERT_EQ(r.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_EQ(r[i].time, m[i].time);
    EXPECT_EQ(r[i].keep, mask[i] != 0);
  }
  const MarkSet w = m.with_keep_bits(mask);
  EXPECT_EQ(w, r);
  EXPECT_THROW(m.with_keep_bits(std::vector<std::uint8_t>(m.size() + 1)), std::invalid_argument);
  double kept = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    for (auto b : sample_keep_mask(m, 5, rep)) kept += b;
  }
  const double n = 200.0 * m.size();
  EXPECT_NEAR(kept / n, 0.25, 4 * std::sqrt(0.25 * 0.75 / n));
}

}  // namespace
}  // namespace spinperc
