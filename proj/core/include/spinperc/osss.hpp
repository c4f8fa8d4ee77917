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
#include <span>
#include <string>
#include <vector>

#include "spinperc/estimators.hpp"
#include "spinperc/glauber.hpp"
#include "spinperc/lattice.hpp"
#include "spinperc/random_fields.hpp"

namespace spinperc {

/// A fixed mark skeleton mu' on a finite window. The remaining randomness is one initial
/// spin per window site and one keep bit per mark of time <= tau.
///
/// Variables are numbered sites first (row-major over the window), then marks in time order.
class QuenchedInstance {
 public:
  QuenchedInstance(const BoxRegion& window, const BoxRegion& box, const GlauberParams& params,
                   const MarkSet& skeleton, BoundaryCondition bc = BoundaryCondition::kFree);

  const BoxRegion& window() const noexcept { return window_; }
  const BoxRegion& box() const noexcept { return box_; }
  const GlauberParams& params() const noexcept { return params_; }
  BoundaryCondition bc() const noexcept { return bc_; }
  /// Marks with time <= tau; keep bits are ignored.
  const MarkSet& skeleton() const noexcept { return skeleton_; }

  std::size_t site_count() const noexcept { return window_.size(); }
  std::size_t mark_count() const noexcept { return skeleton_.size(); }
  std::size_t variable_count() const noexcept { return site_count() + mark_count(); }

  /// Window sites whose initial spin can affect sigma_tau(x).
  const std::vector<std::uint32_t>& query_sites(std::size_t box_index) const {
    return query_sites_.at(box_index);
  }
  /// Marks located in the support of x.
  const std::vector<std::uint32_t>& query_marks(std::size_t box_index) const {
    return query_marks_.at(box_index);
  }
  const SupportSet& support(std::size_t box_index) const { return supports_.at(box_index); }

 private:
  BoxRegion window_;
  BoxRegion box_;
  GlauberParams params_;
  BoundaryCondition bc_;
  MarkSet skeleton_;
  std::vector<SupportSet> supports_;
  std::vector<std::vector<std::uint32_t>> query_sites_;
  std::vector<std::vector<std::uint32_t>> query_marks_;
};

/// Draws the skeleton on `window` from (seed, replicate).
QuenchedInstance sample_instance(const BoxRegion& window, const BoxRegion& box,
                                 const GlauberParams& params, std::uint64_t seed,
                                 std::uint64_t replicate,
                                 BoundaryCondition bc = BoundaryCondition::kFree);

/// ceil(log n) with n = box height - 1 (at least 1).
std::int32_t default_good_radius(const BoxRegion& box);

struct GoodEvent {
  std::vector<std::uint8_t> per_site;  // box row-major
  bool holds = true;
};

/// G_x = [support of x within B(x, radius)] for every box site; radius < 0 selects the default.
GoodEvent good_event(const QuenchedInstance& instance, std::int32_t radius = -1);

/// One value of the binary randomness.
struct Assignment {
  std::vector<Spin> spins;          // per window site
  std::vector<std::uint8_t> keep;   // per skeleton mark
};

/// sigma_tau on the window for an assignment.
SpinField evaluate(const QuenchedInstance& instance, const Assignment& a);

struct AlgorithmRun {
  bool decision = false;
  std::vector<std::uint8_t> revealed_sites;  // per window site
  std::vector<std::uint8_t> revealed_marks;  // per skeleton mark
  std::vector<std::uint32_t> queried;        // box sites queried, in order
};

/// The crossing-exploration algorithm with column Z (box-relative x coordinate).
/// If the good event fails everything relevant is revealed at once.
AlgorithmRun run_algorithm(const QuenchedInstance& instance, const Assignment& a, std::int32_t z,
                           std::int32_t radius = -1);

struct VariableAudit {
  enum class Kind { kSite, kMark };
  Kind kind = Kind::kSite;
  std::uint32_t id = 0;  // site row-major index or mark index
  Site site{};
  double time = 0.0;     // marks only
  double revealment = 0.0;
  double revealment_se = 0.0;
  double influence = 0.0;
  double influence_se = 0.0;
};

struct AuditReport {
  bool exact = true;
  double rho = 0.0;
  std::uint32_t thickening = 1;
  std::uint64_t replicates = 0;  // 0 for exact audits
  double probability = 0.0;
  double probability_se = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
  double russo_lhs = 0.0;        // d/drho P[C]; NaN for Monte Carlo audits
  double russo_rhs = 0.0;        // sum of initial-condition influences
  double osss_lhs = 0.0;
  double osss_rhs = 0.0;
  double max_site_revealment = 0.0;
  std::vector<VariableAudit> variables;
};

inline constexpr std::size_t kMaxExactVariables = 24;

/// Full enumeration of the hypercube. Throws std::invalid_argument beyond kMaxExactVariables.
AuditReport exact_audit(const QuenchedInstance& instance, double rho, std::int32_t radius = -1,
                        const RunOptions& opts = {});

/// Samples (assignment, Z) pairs on the fixed skeleton. Influences cost one extra
/// evaluation per variable and replicate and can be skipped.
AuditReport monte_carlo_audit(const QuenchedInstance& instance, double rho,
                              std::uint64_t replicates, std::uint64_t seed,
                              bool with_influences = true, std::int32_t radius = -1,
                              const RunOptions& opts = {});

}  // namespace spinperc
