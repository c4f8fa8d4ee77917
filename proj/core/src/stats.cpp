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

#include "spinperc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinperc {

double MomentAccumulator::mean() const noexcept {
  return count_ == 0 ? 0.0 : sum_ / static_cast<double>(count_);
}

double MomentAccumulator::variance() const noexcept {
  if (count_ < 2) return 0.0;
  const double n = static_cast<double>(count_);
  const double m = sum_ / n;
  return std::max(0.0, (sum_sq_ - n * m * m) / (n - 1.0));
}

Estimate MomentAccumulator::estimate() const noexcept {
  Estimate e;
  e.mean = mean();
  e.replicates = count_;
  e.std_error = count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
  return e;
}

Estimate estimate_of(std::span<const double> samples) {
  MomentAccumulator acc;
  for (double x : samples) acc.add(x);
  return acc.estimate();
}

double combined_stderr(const Estimate& a, const Estimate& b) noexcept {
  return std::hypot(a.std_error, b.std_error);
}

bool agree_within(const Estimate& a, const Estimate& b, double z) noexcept {
  return std::abs(a.mean - b.mean) <= z * combined_stderr(a, b);
}

MedianEstimate median_with_ci(std::vector<double> samples, double z) {
  if (samples.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(samples.begin(), samples.end());
  const auto n = samples.size();
  const double nd = static_cast<double>(n);
  MedianEstimate out;
  out.replicates = n;
  out.median = n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  // Ranks (1-based) j < k with P[X_(j) <= median <= X_(k)] ~ 1 - alpha, via the
  // normal approximation to Binomial(n, 1/2).
  const double half_width = z * std::sqrt(nd) / 2.0;
  const auto lo_rank = static_cast<std::int64_t>(std::floor(nd / 2.0 - half_width));
  const auto hi_rank = static_cast<std::int64_t>(std::ceil(nd / 2.0 + half_width)) + 1;
  const auto clamp_rank = [&](std::int64_t r) {
    return static_cast<std::size_t>(std::clamp<std::int64_t>(r, 1, static_cast<std::int64_t>(n)) - 1);
  };
  out.ci_low = samples[clamp_rank(lo_rank)];
  out.ci_high = samples[clamp_rank(hi_rank)];
  out.std_error = (out.ci_high - out.ci_low) / (2.0 * z);
  return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    p += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-12) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

double lag1_autocorrelation(std::span<const double> values, const BoxRegion& region) {
  if (values.size() != region.size()) throw std::invalid_argument("field size does not match region");
  const auto w = static_cast<std::size_t>(region.width());
  const auto h = static_cast<std::size_t>(region.height());
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0, count = 0;
  auto pair = [&](double a, double b) {
    sa += a;
    sb += b;
    saa += a * a;
    sbb += b * b;
    sab += a * b;
    count += 1;
  };
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double v = values[y * w + x];
      if (x + 1 < w) pair(v, values[y * w + x + 1]);
      if (y + 1 < h) pair(v, values[(y + 1) * w + x]);
    }
  }
  if (count < 2) return 0.0;
  const double cov = sab / count - (sa / count) * (sb / count);
  const double va = saa / count - (sa / count) * (sa / count);
  const double vb = sbb / count - (sb / count) * (sb / count);
  if (va <= 0 || vb <= 0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace spinperc
