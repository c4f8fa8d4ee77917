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
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "spinperc/bootstrap.hpp"
#include "spinperc/certify.hpp"
#include "spinperc/glauber.hpp"
#include "spinperc/stats.hpp"

namespace spinperc {

struct RunOptions {
  unsigned threads = 0;  // 0 selects std::thread::hardware_concurrency()
  MarginPolicy margin{};
};

unsigned resolve_threads(unsigned requested) noexcept;

/// Runs body(i) for i in [0, count) on a pool of worker threads. Rethrows the exception
/// of the smallest failing index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// f(i) for every replicate i, stored by index so the result does not depend on scheduling.
template <class F>
auto map_replicates(std::size_t count, unsigned threads, F&& f) {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

/// sigma_tau on `window` distributed as on Z^2, for replicate `replicate` of `seed`.
SpinField sample_field(const GlauberParams& params, double rho, const BoxRegion& window,
                       std::uint64_t seed, std::uint64_t replicate, const MarginPolicy& margin = {});

/// P[C(n, m)]: left-right +1 crossing of [0,n] x [0,m] at time tau.
Estimate estimate_crossing(const GlauberParams& params, double rho, std::int32_t n, std::int32_t m,
                           std::uint64_t replicates, std::uint64_t seed, const RunOptions& opts = {});

/// Both sides of P[C(n,m)^c] = P[C*(m,n)] from independent replicates, plus the number of
/// sampled fields violating the per-configuration dichotomy.
struct DualityEstimate {
  Estimate no_plus_crossing;
  Estimate star_minus_transposed;
  std::uint64_t dichotomy_failures = 0;
};
DualityEstimate estimate_duality(const GlauberParams& params, double rho, std::int32_t n,
                                 std::int32_t m, std::uint64_t replicates, std::uint64_t seed,
                                 const RunOptions& opts = {});

struct ThresholdSample {
  std::vector<double> values;
  MedianEstimate median(double z = kZ95) const { return median_with_ci(values, z); }
};

/// Per replicate, the rho at which [0,n] x [0,m] starts to be crossed, by bisection with
/// `iterations` steps on fixed randomness.
ThresholdSample rho_threshold_sample(const GlauberParams& params, std::int32_t n, std::int32_t m,
                                     std::uint64_t replicates, std::uint64_t seed,
                                     const RunOptions& opts = {}, int iterations = 20);

/// Per replicate, the first time the bootstrap process crosses [0,n] x [0,m]
/// (kNever if not crossed by `horizon`).
ThresholdSample t_threshold_sample(const RateTable& table, std::int32_t n, std::int32_t m,
                                   double horizon, std::uint32_t thickening,
                                   std::uint64_t replicates, std::uint64_t seed,
                                   const RunOptions& opts = {});

/// Cov(sigma_tau(0), sigma_tau((d, 0))) for each d.
std::vector<Estimate> covariance_decay(const GlauberParams& params, double rho,
                                       const std::vector<std::int32_t>& distances,
                                       std::uint64_t replicates, std::uint64_t seed,
                                       const RunOptions& opts = {});

/// P[(0,0) reaches (d,0) before t] on Z^2 for each d, with marks drawn on demand.
std::vector<Estimate> reach_probability(double t, std::uint32_t thickening,
                                        const std::vector<std::int32_t>& distances,
                                        std::uint64_t replicates, std::uint64_t seed,
                                        const RunOptions& opts = {});

/// c1(t) * exp(-(1/4) d log d) with c1(t) = exp(2^11 t log(8t)), in log space.
double log_light_cone_bound(double t, std::int32_t d);

struct QuenchedArmSummary {
  std::vector<double> quenched;  // one estimate of P[Arm | mu'] per skeleton
  Estimate annealed;             // mean over skeletons
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
  double max = 0.0;
};

/// For each of `outer` skeletons mu' around the origin, the fraction of `inner` fresh
/// (seeds, keep bits) draws with Arm_0(m, n).
QuenchedArmSummary quenched_arm_estimate(const GlauberParams& params, double rho, std::int32_t m,
                                         std::int32_t n, std::uint64_t outer, std::uint64_t inner,
                                         std::uint64_t seed, const RunOptions& opts = {});

/// P[Arm_0(m, n)] from independent replicates.
Estimate arm_estimate(const GlauberParams& params, double rho, std::int32_t m, std::int32_t n,
                      std::uint64_t replicates, std::uint64_t seed, const RunOptions& opts = {});

/// The min-rho field of one realization sampled directly on `window` with boundary `bc`.
ThresholdField heatmap(const GlauberParams& params, BoundaryCondition bc, const BoxRegion& window,
                       std::uint64_t seed);

/// Binary PGM (P5, maxval 65535, top row first). `comment` lines are written after the
/// magic as '#' lines.
void write_pgm(const ThresholdField& field, std::ostream& out, const std::string& comment = {});

struct ThinningRow {
  std::uint32_t k = 1;
  Estimate variance;               // sample variance of Z-hat over skeletons, with its stderr
  double debiased_variance = 0.0;  // minus the mean inner binomial noise
  double mean_z = 0.0;
  std::uint64_t outer = 0;
  std::uint64_t inner = 0;
};

/// Z = P[C(n,m) | mu] for the dynamics on [0,n] x [0,m] with free boundary, estimated per
/// thickened realization by resampling keep bits and seeds `inner` times.
std::vector<ThinningRow> thinning_variance_check(const GlauberParams& params, double rho,
                                                 std::int32_t n, std::int32_t m,
                                                 const std::vector<std::uint32_t>& k_values,
                                                 std::uint64_t outer, std::uint64_t inner,
                                                 std::uint64_t seed, const RunOptions& opts = {});

}  // namespace spinperc
