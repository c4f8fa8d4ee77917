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
#include <sstream>

#include "spinperc/bootstrap.hpp"
#include "spinperc/geometry.hpp"
#include "spinperc/stats.hpp"

namespace spinperc {
namespace {

std::string table_text(const RateTable& t) {
  std::ostringstream out;
  out << "# c e n w s rate\n";
  for (std::size_t i = 0; i < RateTable::kSize; ++i) {
    for (int b = 4; b >= 0; --b) out << (((i >> b) & 1U) ? "+1 " : "-1 ");
    out << t.rate(i) << "\n";
  }
  return out.str();
}

TEST(RateTable, Validation) {
  EXPECT_TRUE(validate_rate_table(RateTable::constant(1.0)));
  EXPECT_TRUE(validate_rate_table(RateTable::counting()));
  EXPECT_TRUE(validate_rate_table(RateTable::counting(0.37)));
  auto e = RateTable::counting().entries();
  e[0] = 0.0;
  EXPECT_FALSE(validate_rate_table(RateTable(0.0, e)));
  // Monotonicity broken between n alone and n + e.
  e = RateTable::counting().entries();
  e[RateTable::index(false, true, true, false, false)] = 0.2;
  EXPECT_FALSE(validate_rate_table(RateTable(0.1, e)));
  // Rotation invariance broken: only the east neighbor counts.
  std::array<double, RateTable::kSize> east{};
  for (std::size_t i = 0; i < RateTable::kSize; ++i) east[i] = (i & 8U) || i == 31 ? 1.0 : 0.5;
  const auto v = rate_table_violations(RateTable(0.5, east));
  EXPECT_FALSE(v.empty());
  bool rotation = false;
  for (const auto& s : v) rotation = rotation || s.find("rotation") != std::string::npos;
  EXPECT_TRUE(rotation);
  e = RateTable::counting().entries();
  e[31] = 0.9;
  EXPECT_FALSE(validate_rate_table(RateTable(0.1, e)));
}

TEST(RateTable, ParseRoundTripAndErrors) {
  const RateTable c = RateTable::counting(0.25);
  const RateTable back = parse_rate_table(table_text(c));
  EXPECT_EQ(back.entries(), c.entries());
  EXPECT_EQ(back.epsilon(), 0.25);
  std::string text = table_text(c);
  const std::string truncated = text.substr(0, text.rfind("+1 +1"));
  EXPECT_THROW(parse_rate_table(truncated), ConfigError);
  EXPECT_THROW(parse_rate_table(text + "-1 -1 -1 -1 -1 0.25\n"), ConfigError);
  EXPECT_THROW(parse_rate_table("0 1 1 1 1 0.5\n"), ConfigError);
  auto bad = RateTable::counting().entries();
  bad[0] = 0.0;
  try {
    parse_rate_table(table_text(RateTable(0.0, bad)));
    FAIL();
  } catch (const ConfigError& err) {
    EXPECT_NE(std::string(err.what()).find("epsilon"), std::string::npos);
  }
  EXPECT_THROW(load_rate_table("/nonexistent/table.txt"), ConfigError);
}

TEST(Bootstrap, ConstantOneFlipsAtFirstKeptMark) {
  const BoxRegion r({0, 0}, 30, 30);
  const MarkSet marks = sample_marks(r, 8.0, 1, 3);
  const FlipSchedule s = evolve_bootstrap(marks, RateTable::constant(1.0), r);
  std::vector<double> times;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto idx = marks.marks_at(i);
    const double first = idx.empty() ? kNever : marks[idx[0]].time;
    EXPECT_EQ(s.flip_times[i], first);
    if (first != kNever) times.push_back(first);
  }
  // Exp(1) truncated at the horizon: compare with the conditional law.
  const double h = 8.0;
  const double norm = -std::expm1(-h);
  const double d = ks_statistic(times, [&](double x) { return x <= 0 ? 0.0 : -std::expm1(-x) / norm; });
  EXPECT_GT(ks_pvalue(d, times.size()), 0.01);
}

TEST(Bootstrap, KeepBitsRespected) {
  const BoxRegion r({0, 0}, 10, 10);
  const MarkSet marks = sample_marks(r, 5.0, 4, 8);
  const FlipSchedule s = evolve_bootstrap(marks, RateTable::constant(1.0), r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    double first = kNever;
    for (auto j : marks.marks_at(i)) {
      if (marks[j].keep) {
        first = marks[j].time;
        break;
      }
    }
    EXPECT_EQ(s.flip_times[i], first);
  }
}

TEST(Bootstrap, SandwichAndMonotone) {
  const RateTable lam = RateTable::counting(0.2);
  const BoxRegion r({0, 0}, 20, 20);
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const MarkSet marks = sample_marks(r, 6.0, 1 + rep % 3, 40, rep);
    const FlipSchedule s1 = evolve_bootstrap(marks, RateTable::constant(1.0), r);
    const FlipSchedule sl = evolve_bootstrap(marks, lam, r);
    const FlipSchedule se = evolve_bootstrap(marks, RateTable::constant(0.2), r);
    for (std::size_t i = 0; i < r.size(); ++i) {
      ASSERT_LE(s1.flip_times[i], sl.flip_times[i]);
      ASSERT_LE(sl.flip_times[i], se.flip_times[i]);
    }
    ASSERT_LE(first_crossing_time(s1, r), first_crossing_time(sl, r));
    SpinField prev = field_at(sl, 0.0);
    EXPECT_EQ(prev.count_plus(), 0u);
    for (double t = 0.5; t <= 6.0; t += 0.5) {
      const SpinField f = field_at(sl, t);
      EXPECT_TRUE(pointwise_leq(prev, f));
      prev = f;
    }
  }
}

TEST(Bootstrap, AllMinusBeforeFirstMark) {
  const BoxRegion r({0, 0}, 6, 6);
  const MarkSet marks = sample_marks(r, 2.0, 1, 12);
  double first = kNever;
  for (const Mark& m : marks.marks()) first = std::min(first, m.time);
  const FlipSchedule s = evolve_bootstrap(marks, RateTable::counting(), r);
  EXPECT_EQ(field_at(s, first * 0.999).count_plus(), 0u);
  EXPECT_THROW(field_at(s, -1.0), std::invalid_argument);
}

TEST(FirstCrossing, SmallCasesAndBisectionOracle) {
  const BoxRegion one({2, 2}, 1, 1);
  EXPECT_EQ(first_crossing_time(FlipSchedule{one, {0.7}, true}, one), 0.7);
  const BoxRegion r({0, 0}, 4, 3);
  EXPECT_EQ(first_crossing_time(FlipSchedule{r, std::vector<double>(12, kNever), true}, r), kNever);
  const BoxRegion big({0, 0}, 16, 16);
  for (std::uint64_t rep = 0; rep < 30; ++rep) {
    const MarkSet marks = sample_marks(big, 6.0, 1, 70, rep);
    const FlipSchedule s = evolve_bootstrap(marks, RateTable::counting(), big);
    const double t = first_crossing_time(s, big);
    std::vector<double> cand = s.flip_times;
    std::sort(cand.begin(), cand.end());
    std::size_t lo = 0, hi = cand.size();
    // Smallest candidate time with a crossing, by bisection over sorted flip times.
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cand[mid] != kNever && plus_crossing(field_at(s, cand[mid]), big)) hi = mid;
      else lo = mid + 1;
    }
    const double expect = lo < cand.size() ? cand[lo] : kNever;
    EXPECT_EQ(t, expect);
  }
}

TEST(TimeChange, ConstantTablesScale) {
  const BoxRegion r({0, 0}, 12, 12);
  for (double eps : {0.1, 0.5}) {
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
      const MarkSet marks = sample_marks(r, 3.0, 2, 90, rep);
      const FlipSchedule s1 = evolve_bootstrap(marks, RateTable::constant(1.0), r);
      const FlipSchedule se = evolve_bootstrap(time_change(marks, eps), RateTable::constant(eps), r);
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double want = s1.flip_times[i] == kNever ? kNever : s1.flip_times[i] / eps;
        ASSERT_EQ(se.flip_times[i], want);
      }
    }
  }
  EXPECT_THROW(time_change(MarkSet(r, 1.0, 1, {}), 0.0), std::invalid_argument);
}

TEST(Bootstrap, MarginalSandwichInLaw) {
  const RateTable lam = RateTable::counting(0.1);
  const BoxRegion window({0, 0}, 1, 1);
  const double t = 2.0;
  MomentAccumulator acc;
  for (std::uint64_t rep = 0; rep < 3000; ++rep) {
    const CertifiedBootstrap c = sample_certified_bootstrap(window, t, 1, lam, 17, rep);
    acc.add(c.schedule.flip_times[0] <= t ? 1.0 : 0.0);
  }
  const Estimate e = acc.estimate();
  EXPECT_GE(e.mean, -std::expm1(-0.1 * t) - 3 * e.std_error);
  EXPECT_LE(e.mean, -std::expm1(-t) + 3 * e.std_error);
}

TEST(Bootstrap, CertifiedMatchesLargerRegion) {
  const RateTable lam = RateTable::counting(0.1);
  const BoxRegion window({0, 0}, 8, 8);
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const CertifiedBootstrap c = sample_certified_bootstrap(window, 3.0, 1, lam, 23, rep, MarginPolicy{1, 8});
    EXPECT_TRUE(c.schedule.exact);
    const MarkSet big = sample_marks(window.expanded(c.margin + 25), 3.0, 1, 23, rep);
    EXPECT_EQ(evolve_bootstrap(big, lam, window).flip_times, c.schedule.flip_times);
  }
}

}  // namespace
}  // namespace spinperc
