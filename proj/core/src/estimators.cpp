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

#include "spinperc/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "spinperc/geometry.hpp"
#include "spinperc/rng.hpp"

namespace spinperc {

unsigned resolve_threads(unsigned requested) noexcept {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count || failed.load(std::memory_order_relaxed)) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::jthread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

namespace {

void require_replicates(std::uint64_t replicates) {
  if (replicates < 2) throw std::invalid_argument("need at least two replicates");
}

void require_probability(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
}

Estimate mean_of(const std::vector<std::uint8_t>& hits) {
  MomentAccumulator acc;
  for (std::uint8_t h : hits) acc.add(h);
  return acc.estimate();
}

}  // namespace

SpinField sample_field(const GlauberParams& params, double rho, const BoxRegion& window,
                       std::uint64_t seed, std::uint64_t replicate, const MarginPolicy& margin) {
  const CertifiedSample s = sample_certified(window, params, seed, replicate, margin);
  return evolve(s.seeds, s.marks, rho, params, BoundaryCondition::kFree, window);
}

Estimate estimate_crossing(const GlauberParams& params, double rho, std::int32_t n, std::int32_t m,
                           std::uint64_t replicates, std::uint64_t seed, const RunOptions& opts) {
  require_replicates(replicates);
  require_probability(rho);
  const BoxRegion box = BoxRegion::crossing_box(n, m);
  const auto hits = map_replicates(replicates, opts.threads, [&](std::size_t r) {
    return static_cast<std::uint8_t>(
        plus_crossing(sample_field(params, rho, box, seed, r, opts.margin), box));
  });
  return mean_of(hits);
}

DualityEstimate estimate_duality(const GlauberParams& params, double rho, std::int32_t n,
                                 std::int32_t m, std::uint64_t replicates, std::uint64_t seed,
                                 const RunOptions& opts) {
  require_replicates(replicates);
  require_probability(rho);
  const BoxRegion box = BoxRegion::crossing_box(n, m);
  const BoxRegion rotated = BoxRegion::crossing_box(m, n);
  struct Row {
    std::uint8_t no_plus = 0;
    std::uint8_t star = 0;
    std::uint8_t broken = 0;
  };
  const auto rows = map_replicates(replicates, opts.threads, [&](std::size_t r) {
    Row row;
    const SpinField a = sample_field(params, rho, box, seed, 2 * r, opts.margin);
    row.no_plus = !plus_crossing(a, box);
    row.broken = !check_duality(a, box);
    const SpinField b = sample_field(params, rho, rotated, seed, 2 * r + 1, opts.margin);
    row.star = star_minus_crossing(b, rotated);
    return row;
  });
  MomentAccumulator no_plus, star;
  DualityEstimate out;
  for (const Row& row : rows) {
    no_plus.add(row.no_plus);
    star.add(row.star);
    out.dichotomy_failures += row.broken;
  }
  out.no_plus_crossing = no_plus.estimate();
  out.star_minus_transposed = star.estimate();
  return out;
}

ThresholdSample rho_threshold_sample(const GlauberParams& params, std::int32_t n, std::int32_t m,
                                     std::uint64_t replicates, std::uint64_t seed,
                                     const RunOptions& opts, int iterations) {
  if (replicates < 1) throw std::invalid_argument("need at least one replicate");
  const BoxRegion box = BoxRegion::crossing_box(n, m);
  ThresholdSample out;
  out.values = map_replicates(replicates, opts.threads, [&](std::size_t r) {
    const CertifiedSample s = sample_certified(box, params, seed, r, opts.margin);
    auto crossed = [&](double rho) {
      return plus_crossing(evolve(s.seeds, s.marks, rho, params, BoundaryCondition::kFree, box), box);
    };
    if (!crossed(1.0)) return 1.0;
    if (crossed(0.0)) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < iterations; ++it) {
      const double mid = 0.5 * (lo + hi);
      (crossed(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  });
  return out;
}

ThresholdSample t_threshold_sample(const RateTable& table, std::int32_t n, std::int32_t m,
                                   double horizon, std::uint32_t thickening,
                                   std::uint64_t replicates, std::uint64_t seed,
                                   const RunOptions& opts) {
  if (replicates < 1) throw std::invalid_argument("need at least one replicate");
  const BoxRegion box = BoxRegion::crossing_box(n, m);
  ThresholdSample out;
  out.values = map_replicates(replicates, opts.threads, [&](std::size_t r) {
    const CertifiedBootstrap s =
        sample_certified_bootstrap(box, horizon, thickening, table, seed, r, opts.margin);
    return first_crossing_time(s.schedule, box);
  });
  return out;
}

std::vector<Estimate> covariance_decay(const GlauberParams& params, double rho,
                                       const std::vector<std::int32_t>& distances,
                                       std::uint64_t replicates, std::uint64_t seed,
                                       const RunOptions& opts) {
  require_replicates(replicates);
  require_probability(rho);
  if (distances.empty()) return {};
  for (std::int32_t d : distances) {
    if (d < 0) throw std::invalid_argument("distances must be >= 0");
  }
  const std::int32_t dmax = *std::max_element(distances.begin(), distances.end());
  const BoxRegion window({0, 0}, dmax + 1, 1);
  const auto fields = map_replicates(replicates, opts.threads, [&](std::size_t r) {
    const SpinField f = sample_field(params, rho, window, seed, r, opts.margin);
    std::vector<std::int8_t> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = static_cast<std::int8_t>(f[i].value());
    return v;
  });
  const double nr = static_cast<double>(replicates);
  double mean0 = 0.0;
  for (const auto& v : fields) mean0 += v[0];
  mean0 /= nr;
  std::vector<Estimate> out;
  for (std::int32_t d : distances) {
    const auto di = static_cast<std::size_t>(d);
    double meand = 0.0;
    for (const auto& v : fields) meand += v[di];
    meand /= nr;
    MomentAccumulator acc;
    for (const auto& v : fields) acc.add((v[0] - mean0) * (v[di] - meand));
    Estimate e = acc.estimate();
    e.mean *= nr / (nr - 1.0);
    out.push_back(e);
  }
  return out;
}

std::vector<Estimate> reach_probability(double t, std::uint32_t thickening,
                                        const std::vector<std::int32_t>& distances,
                                        std::uint64_t replicates, std::uint64_t seed,
                                        const RunOptions& opts) {
  require_replicates(replicates);
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  const auto key = [](Site s) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.x)) << 32) |
           static_cast<std::uint32_t>(s.y);
  };
  const auto rows = map_replicates(replicates, opts.threads, [&](std::size_t r) {
    std::unordered_map<std::uint64_t, std::vector<Mark>> marks;
    std::unordered_map<std::uint64_t, double> arrival;
    auto marks_of = [&](Site s) -> const std::vector<Mark>& {
      auto [it, fresh] = marks.try_emplace(key(s));
      if (fresh) it->second = sample_site_marks(s, t, thickening, seed, r);
      return it->second;
    };
    auto next_mark = [&](Site s, double after) {
      for (const Mark& m : marks_of(s)) {
        if (m.time >= t) break;
        if (m.time > after) return m.time;
      }
      return std::numeric_limits<double>::infinity();
    };
    using Entry = std::pair<double, Site>;
    auto later = [](const Entry& a, const Entry& b) { return a.first > b.first; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(later)> queue(later);
    const double a0 = next_mark({0, 0}, -1.0);
    if (std::isfinite(a0)) {
      arrival[key({0, 0})] = a0;
      queue.emplace(a0, Site{0, 0});
    }
    while (!queue.empty()) {
      const auto [a, s] = queue.top();
      queue.pop();
      if (a > arrival[key(s)]) continue;
      for (Site n : neighbors4(s)) {
        const double b = next_mark(n, a);
        if (!std::isfinite(b)) continue;
        auto [it, fresh] = arrival.try_emplace(key(n), b);
        if (fresh || b < it->second) {
          it->second = b;
          queue.emplace(b, n);
        }
      }
    }
    std::vector<std::uint8_t> hit(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) {
      hit[i] = distances[i] == 0 || arrival.count(key({distances[i], 0})) != 0;
    }
    return hit;
  });
  std::vector<Estimate> out;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    MomentAccumulator acc;
    for (const auto& row : rows) acc.add(row[i]);
    out.push_back(acc.estimate());
  }
  return out;
}

double log_light_cone_bound(double t, std::int32_t d) {
  const double dd = static_cast<double>(d);
  const double log_c1 = 2048.0 * t * std::log(8.0 * t);
  return log_c1 - 0.25 * dd * (d > 0 ? std::log(dd) : 0.0);
}

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(idx, 1, v.size()) - 1];
}

}  // namespace

QuenchedArmSummary quenched_arm_estimate(const GlauberParams& params, double rho, std::int32_t m,
                                         std::int32_t n, std::uint64_t outer, std::uint64_t inner,
                                         std::uint64_t seed, const RunOptions& opts) {
  if (m < 0 || m >= n) throw std::invalid_argument("arm event needs 0 <= m < n");
  require_replicates(outer);
  if (inner < 1) throw std::invalid_argument("need at least one inner replicate");
  require_probability(rho);
  const BoxRegion window = BoxRegion::ball({0, 0}, n + 1);
  QuenchedArmSummary out;
  out.quenched = map_replicates(outer, opts.threads, [&](std::size_t o) {
    const CertifiedSample s =
        sample_certified(window, params, seed, o, opts.margin, KeepBits::kAny);
    const std::uint64_t inner_seed = derive_seed(seed, o + 1);
    std::uint64_t hits = 0;
    for (std::uint64_t j = 0; j < inner; ++j) {
      const SeedField seeds = sample_seed_field(s.marks.region(), inner_seed, j);
      const auto keep = sample_keep_mask(s.marks, inner_seed, j);
      const SpinField f = evolve_from(initial_field(seeds, rho), s.marks, params,
                                      BoundaryCondition::kFree, window, keep);
      hits += arm_event(f, {0, 0}, m, n);
    }
    return static_cast<double>(hits) / static_cast<double>(inner);
  });
  out.annealed = estimate_of(out.quenched);
  out.q50 = quantile(out.quenched, 0.5);
  out.q90 = quantile(out.quenched, 0.9);
  out.q99 = quantile(out.quenched, 0.99);
  out.max = *std::max_element(out.quenched.begin(), out.quenched.end());
  return out;
}

Estimate arm_estimate(const GlauberParams& params, double rho, std::int32_t m, std::int32_t n,
                      std::uint64_t replicates, std::uint64_t seed, const RunOptions& opts) {
  if (m < 0 || m >= n) throw std::invalid_argument("arm event needs 0 <= m < n");
  require_replicates(replicates);
  require_probability(rho);
  const BoxRegion window = BoxRegion::ball({0, 0}, n + 1);
  const auto hits = map_replicates(replicates, opts.threads, [&](std::size_t r) {
    return static_cast<std::uint8_t>(
        arm_event(sample_field(params, rho, window, seed, r, opts.margin), {0, 0}, m, n));
  });
  return mean_of(hits);
}

ThresholdField heatmap(const GlauberParams& params, BoundaryCondition bc, const BoxRegion& window,
                       std::uint64_t seed) {
  params.validate();
  const MarkSet marks = sample_marks_or_empty(window, params.horizon, params.thickening, seed, 0);
  const SeedField seeds = sample_seed_field(window, seed, 0);
  return min_rho_map(seeds, marks, params, bc, window);
}

void write_pgm(const ThresholdField& field, std::ostream& out, const std::string& comment) {
  const BoxRegion& r = field.region;
  out << "P5\n";
  std::istringstream lines(comment);
  for (std::string line; std::getline(lines, line);) out << "# " << line << "\n";
  out << r.width() << " " << r.height() << "\n65535\n";
  for (std::int32_t y = r.y_max(); y >= r.y_min(); --y) {
    for (std::int32_t x = r.x_min(); x <= r.x_max(); ++x) {
      const double v = std::clamp(field.values[r.index_of({x, y})], 0.0, 1.0);
      const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
      out.put(static_cast<char>(q >> 8));
      out.put(static_cast<char>(q & 0xFF));
    }
  }
}

std::vector<ThinningRow> thinning_variance_check(const GlauberParams& params, double rho,
                                                 std::int32_t n, std::int32_t m,
                                                 const std::vector<std::uint32_t>& k_values,
                                                 std::uint64_t outer, std::uint64_t inner,
                                                 std::uint64_t seed, const RunOptions& opts) {
  require_replicates(outer);
  require_replicates(inner);
  require_probability(rho);
  const BoxRegion box = BoxRegion::crossing_box(n, m);
  std::vector<ThinningRow> rows;
  for (std::uint32_t k : k_values) {
    if (k < 1) throw std::invalid_argument("thickening must be >= 1");
    GlauberParams p = params;
    p.thickening = k;
    const std::uint64_t k_seed = derive_seed(seed, k);
    const auto z = map_replicates(outer, opts.threads, [&](std::size_t o) {
      const MarkSet marks = sample_marks_or_empty(box, p.horizon, k, k_seed, o);
      const std::uint64_t inner_seed = derive_seed(k_seed, o + 1);
      std::uint64_t hits = 0;
      for (std::uint64_t j = 0; j < inner; ++j) {
        const SeedField seeds = sample_seed_field(box, inner_seed, j);
        const auto keep = sample_keep_mask(marks, inner_seed, j);
        hits += plus_crossing(
            evolve_from(initial_field(seeds, rho), marks, p, BoundaryCondition::kFree, box, keep),
            box);
      }
      return static_cast<double>(hits) / static_cast<double>(inner);
    });
    // Variance of the sample variance: (m4 - (n-3)/(n-1) s^4) / n.
    const double no = static_cast<double>(outer);
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= no;
    double m2 = 0.0, m4 = 0.0, noise = 0.0;
    for (double v : z) {
      const double d = v - mean;
      m2 += d * d;
      m4 += d * d * d * d;
      noise += v * (1.0 - v);
    }
    const double s2 = m2 / (no - 1.0);
    m4 /= no;
    ThinningRow row;
    row.k = k;
    row.variance.mean = s2;
    row.variance.std_error = std::sqrt(std::max(0.0, (m4 - (no - 3.0) / (no - 1.0) * s2 * s2) / no));
    row.variance.replicates = outer;
    row.debiased_variance = s2 - noise / no / (static_cast<double>(inner) - 1.0);
    row.mean_z = mean;
    row.outer = outer;
    row.inner = inner;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace spinperc
