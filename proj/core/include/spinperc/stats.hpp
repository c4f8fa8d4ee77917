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
#include <functional>
#include <span>
#include <vector>

#include "spinperc/lattice.hpp"

namespace spinperc {

/// Two-sided 95% standard normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(replicates)
  std::uint64_t replicates = 0;
};

/// Count, sum and sum of squares; merging is associative.
class MomentAccumulator {
 public:
  void add(double x) noexcept {
    ++count_;
    sum_ += x;
    sum_sq_ += x * x;
  }
  void merge(const MomentAccumulator& o) noexcept {
    count_ += o.count_;
    sum_ += o.sum_;
    sum_sq_ += o.sum_sq_;
  }
  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept;
  /// Unbiased sample variance (0 for fewer than two samples).
  double variance() const noexcept;
  Estimate estimate() const noexcept;

 private:
  std::uint64_t count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

Estimate estimate_of(std::span<const double> samples);

/// sqrt(a^2 + b^2): standard error of a difference of independent estimates.
double combined_stderr(const Estimate& a, const Estimate& b) noexcept;

/// True iff |a - b| <= z * combined_stderr(a, b).
bool agree_within(const Estimate& a, const Estimate& b, double z) noexcept;

/// Sample median with the binomial order-statistic confidence interval.
struct MedianEstimate {
  double median = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double std_error = 0.0;  // (ci_high - ci_low) / (2 z)
  std::uint64_t replicates = 0;
};

/// Values may be +infinity. Needs at least one sample.
MedianEstimate median_with_ci(std::vector<double> samples, double z = kZ95);

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and `cdf`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic p-value of the one-sample KS test for statistic d on n samples.
double ks_pvalue(double d, std::size_t n);

/// Pearson correlation over all pairs of horizontally or vertically adjacent sites of a
/// row-major field on `region`.
double lag1_autocorrelation(std::span<const double> values, const BoxRegion& region);

}  // namespace spinperc
