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

#include "spinperc/certify.hpp"

#include <cmath>
#include <sstream>

#include "spinperc/errors.hpp"

namespace spinperc {

std::int32_t default_margin(double horizon) {
  return static_cast<std::int32_t>(std::ceil(8.0 * horizon)) + 16;
}

std::vector<std::uint8_t> glauber_taint(const MarkSet& marks, const GlauberParams& params,
                                        KeepBits keep) {
  const BoxRegion& region = marks.region();
  std::vector<std::uint8_t> taint(region.size(), 0);
  const UpdateTable table(params.beta);
  // With unknown keep bits a mark may or may not fire, so the old flag survives.
  const bool sure = keep == KeepBits::kRealized || marks.thickening() == 1;
  for (const Mark& m : marks.marks()) {
    if (m.time > params.horizon) break;
    if (keep == KeepBits::kRealized && !m.keep) continue;
    const std::size_t idx = region.index_of(m.site);
    if (table.is_death(m.rate_uniform)) {
      if (sure) taint[idx] = 0;
      continue;
    }
    std::uint8_t t = 0;
    for (Site step : kSteps4) {
      const Site n = m.site + step;
      if (!region.contains(n) || taint[region.index_of(n)] != 0) {
        t = 1;
        break;
      }
    }
    taint[idx] = sure ? t : static_cast<std::uint8_t>(taint[idx] | t);
  }
  return taint;
}

bool window_clean(const std::vector<std::uint8_t>& taint, const BoxRegion& region,
                  const BoxRegion& window) {
  for (std::int32_t y = window.y_min(); y <= window.y_max(); ++y) {
    for (std::int32_t x = window.x_min(); x <= window.x_max(); ++x) {
      if (taint[region.index_of({x, y})] != 0) return false;
    }
  }
  return true;
}

MarkSet sample_marks_or_empty(const BoxRegion& region, double horizon, std::uint32_t thickening,
                              std::uint64_t master_seed, std::uint64_t replicate) {
  if (horizon > 0.0) return sample_marks(region, horizon, thickening, master_seed, replicate);
  return MarkSet(region, 0.0, thickening, {});
}

CertifiedSample sample_certified(const BoxRegion& window, const GlauberParams& params,
                                 std::uint64_t master_seed, std::uint64_t replicate,
                                 const MarginPolicy& policy, KeepBits keep) {
  params.validate();
  std::int32_t margin = policy.initial >= 0 ? policy.initial : default_margin(params.horizon);
  for (int attempt = 0; attempt <= policy.max_doublings; ++attempt) {
    const BoxRegion region = window.expanded(margin);
    MarkSet marks =
        sample_marks_or_empty(region, params.horizon, params.thickening, master_seed, replicate);
    if (window_clean(glauber_taint(marks, params, keep), region, window)) {
      return {window, margin, attempt + 1, sample_seed_field(region, master_seed, replicate),
              std::move(marks)};
    }
    margin = margin > 0 ? margin * 2 : 1;
  }
  std::ostringstream msg;
  msg << "window " << window.width() << "x" << window.height() << " not certified with margin "
      << margin / 2 << " (replicate " << replicate << ", beta " << params.beta << ", horizon "
      << params.horizon << ")";
  throw MarginExhausted(msg.str());
}

}  // namespace spinperc
