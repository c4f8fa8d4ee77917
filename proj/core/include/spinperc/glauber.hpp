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

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "spinperc/errors.hpp"
#include "spinperc/lattice.hpp"
#include "spinperc/random_fields.hpp"

namespace spinperc {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

struct GlauberParams {
  double beta = 1.0;  // kInfiniteBeta is allowed
  double horizon = 1.0;
  std::uint32_t thickening = 1;

  void validate() const;
};

/// Spins outside the simulated region: fixed +1, fixed -1, or absent.
enum class BoundaryCondition { kAllPlus, kAllMinus, kFree };

/// Heat-bath acceptance probability for a neighbor sum in [-4, 4].
/// At beta = infinity this is the pointwise limit (1, 0 or 1/2).
double s_beta_sum(int neighbor_sum, double beta) noexcept;
double s_beta(const std::array<Spin, 4>& z, double beta) noexcept;

/// The update function: +1 iff u <= S_beta(z).
Spin g_beta(const std::array<Spin, 4>& z, double u, double beta) noexcept;

/// S_beta tabulated for neighbor sums -4..4.
class UpdateTable {
 public:
  explicit UpdateTable(double beta) noexcept;
  double accept(int neighbor_sum) const noexcept { return s_[static_cast<std::size_t>(neighbor_sum + 4)]; }
  /// A mark is a death mark when its outcome does not depend on the neighbors.
  bool is_death(double r) const noexcept { return r <= s_[0] || r > s_[8]; }

 private:
  std::array<double, 9> s_{};
};

/// Runs the dynamics on initial.region() with the kept marks of time <= params.horizon,
/// boundary spins from `bc`, and returns sigma_tau on `window`.
///
/// `keep_mask`, when non-empty, replaces the keep bits of `marks` (one byte per mark).
SpinField evolve_from(const SpinField& initial, const MarkSet& marks, const GlauberParams& params,
                      BoundaryCondition bc, const BoxRegion& window,
                      std::span<const std::uint8_t> keep_mask = {});

/// sigma_tau on `window` from the coupled initial field spin_from_seed(U^x, rho).
SpinField evolve(const SeedField& seeds, const MarkSet& marks, double rho,
                 const GlauberParams& params, BoundaryCondition bc, const BoxRegion& window);

/// Which marks a reachability query walks on: the full skeleton or only kept marks.
enum class MarkFilter { kAll, kKept };

/// Earliest time at which an increasing mark chain started at `from` ends at each site
/// of the region (+infinity where no chain ends before t).
std::vector<double> earliest_arrival(Site from, const MarkSet& marks, double t,
                                     MarkFilter filter = MarkFilter::kAll);

/// True iff a nearest-neighbor path x = x_0 ~ ... ~ x_k = y carries marks
/// T^{x_0} < ... < T^{x_k} < t. A site trivially reaches itself.
bool reaches(Site x, Site y, const MarkSet& marks, double t, MarkFilter filter = MarkFilter::kAll);

struct SupportSet {
  Site anchor{};
  std::vector<Site> members;  // row-major order, contains anchor

  bool contains(Site s) const;
  /// Largest l-infinity distance from the anchor.
  std::int64_t radius() const;
};

/// {x} together with every y that reaches x before t, by backward exploration.
SupportSet backward_support(Site x, const MarkSet& marks, double t,
                            MarkFilter filter = MarkFilter::kAll);

/// Sites whose initial spin can affect sigma_t(x): the support plus the neighbors read
/// by its chain marks. Restricted to the mark region.
std::vector<Site> dependency_set(Site x, const MarkSet& marks, double t);

/// sigma_tau(x) by backward exploration with death marks. Throws SupportEscaped if an
/// undetermined update needs a neighbor outside the sampled region.
Spin backward_explore_value(Site x, const MarkSet& marks, const SeedField& seeds, double rho,
                            const GlauberParams& params);

/// Offspring probability p_beta(5) = S_beta(1,1,1,1) - S_beta(-1,-1,-1,-1) of the
/// branching bound on the exploration.
double gw_offspring_prob(double beta);

/// Per-site infimum of {rho in [0,1] : sigma_tau(x) = +1} over a window.
struct ThresholdField {
  BoxRegion region;
  std::vector<double> values;  // row-major; 1.0 where the site is never +1

  double at(Site s) const { return values.at(region.index_of_checked(s)); }
};

ThresholdField min_rho_map(const SeedField& seeds, const MarkSet& marks,
                           const GlauberParams& params, BoundaryCondition bc,
                           const BoxRegion& window);

}  // namespace spinperc
