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

#include "spinperc/glauber.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace spinperc {

void GlauberParams::validate() const {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(horizon >= 0.0) || std::isinf(horizon)) throw std::invalid_argument("horizon must be finite and >= 0");
  if (thickening < 1) throw std::invalid_argument("thickening must be >= 1");
}

double s_beta_sum(int neighbor_sum, double beta) noexcept {
  if (std::isinf(beta)) {
    if (neighbor_sum > 0) return 1.0;
    if (neighbor_sum < 0) return 0.0;
    return 0.5;
  }
  // exp(b s) / (exp(b s) + exp(-b s))
  return 1.0 / (1.0 + std::exp(-2.0 * beta * static_cast<double>(neighbor_sum)));
}

double s_beta(const std::array<Spin, 4>& z, double beta) noexcept {
  int sum = 0;
  for (Spin s : z) sum += s.value();
  return s_beta_sum(sum, beta);
}

Spin g_beta(const std::array<Spin, 4>& z, double u, double beta) noexcept {
  return u <= s_beta(z, beta) ? Spin::plus() : Spin::minus();
}

UpdateTable::UpdateTable(double beta) noexcept {
  for (int s = -4; s <= 4; ++s) s_[static_cast<std::size_t>(s + 4)] = s_beta_sum(s, beta);
}

namespace {

void check_inputs(const BoxRegion& state_region, const MarkSet& marks, const GlauberParams& params,
                  const BoxRegion& window) {
  params.validate();
  if (!(state_region == marks.region())) {
    throw std::invalid_argument("initial field and marks cover different regions");
  }
  if (!state_region.contains(window)) throw std::out_of_range("window exceeds sampled region");
  if (params.horizon > marks.horizon()) {
    throw std::invalid_argument("marks do not cover the requested horizon");
  }
}

int boundary_value(BoundaryCondition bc) noexcept {
  switch (bc) {
    case BoundaryCondition::kAllPlus:
      return 1;
    case BoundaryCondition::kAllMinus:
      return -1;
    case BoundaryCondition::kFree:
      break;
  }
  return 0;
}

bool mark_active(const MarkSet& marks, std::size_t i, MarkFilter filter) noexcept {
  return filter == MarkFilter::kAll || marks[i].keep;
}

}  // namespace

SpinField evolve_from(const SpinField& initial, const MarkSet& marks, const GlauberParams& params,
                      BoundaryCondition bc, const BoxRegion& window,
                      std::span<const std::uint8_t> keep_mask) {
  const BoxRegion& region = initial.region();
  check_inputs(region, marks, params, window);
  if (!keep_mask.empty() && keep_mask.size() != marks.size()) {
    throw std::invalid_argument("keep mask size mismatch");
  }

  const std::int32_t w = region.width();
  const std::int32_t h = region.height();
  std::vector<std::int8_t> state(initial.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    state[i] = static_cast<std::int8_t>(initial[i].value());
  }
  const UpdateTable table(params.beta);
  const int outside = boundary_value(bc);
  const Site o = region.origin();

  const auto all = marks.marks();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Mark& m = all[i];
    if (m.time > params.horizon) break;
    if (keep_mask.empty() ? !m.keep : keep_mask[i] == 0) continue;
    const std::int32_t lx = m.site.x - o.x;
    const std::int32_t ly = m.site.y - o.y;
    const std::size_t idx = static_cast<std::size_t>(ly) * static_cast<std::size_t>(w) +
                            static_cast<std::size_t>(lx);
    int sum = 0;
    sum += lx + 1 < w ? state[idx + 1] : outside;
    sum += ly + 1 < h ? state[idx + static_cast<std::size_t>(w)] : outside;
    sum += lx > 0 ? state[idx - 1] : outside;
    sum += ly > 0 ? state[idx - static_cast<std::size_t>(w)] : outside;
    state[idx] = m.rate_uniform <= table.accept(sum) ? 1 : -1;
  }

  SpinField out(window);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = state[region.index_of(window.site_at(i))] > 0 ? Spin::plus() : Spin::minus();
  }
  return out;
}

SpinField evolve(const SeedField& seeds, const MarkSet& marks, double rho,
                 const GlauberParams& params, BoundaryCondition bc, const BoxRegion& window) {
  return evolve_from(initial_field(seeds, rho), marks, params, bc, window);
}

std::vector<double> earliest_arrival(Site from, const MarkSet& marks, double t, MarkFilter filter) {
  const BoxRegion& region = marks.region();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> arrival(region.size(), kInf);
  if (!region.contains(from)) return arrival;

  // First active mark at `site` strictly after `after` and strictly before t.
  auto next_mark = [&](std::size_t site, double after) {
    for (std::uint32_t gi : marks.marks_at(site)) {
      const Mark& m = marks[gi];
      if (m.time >= t) break;
      if (m.time > after && mark_active(marks, gi, filter)) return m.time;
    }
    return kInf;
  };

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  const std::size_t start = region.index_of(from);
  arrival[start] = next_mark(start, -1.0);
  if (arrival[start] < kInf) queue.emplace(arrival[start], start);
  while (!queue.empty()) {
    const auto [a, idx] = queue.top();
    queue.pop();
    if (a > arrival[idx]) continue;
    const Site s = region.site_at(idx);
    for (Site n : neighbors4(s)) {
      if (!region.contains(n)) continue;
      const std::size_t j = region.index_of(n);
      const double b = next_mark(j, a);
      if (b < arrival[j]) {
        arrival[j] = b;
        queue.emplace(b, j);
      }
    }
  }
  return arrival;
}

bool reaches(Site x, Site y, const MarkSet& marks, double t, MarkFilter filter) {
  if (x == y) return true;
  if (!marks.region().contains(x) || !marks.region().contains(y)) return false;
  const auto arrival = earliest_arrival(x, marks, t, filter);
  return std::isfinite(arrival[marks.region().index_of(y)]);
}

bool SupportSet::contains(Site s) const {
  return std::binary_search(members.begin(), members.end(), s, [](Site a, Site b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
}

std::int64_t SupportSet::radius() const {
  std::int64_t r = 0;
  for (Site s : members) r = std::max(r, linf_distance(s, anchor));
  return r;
}

namespace {

// latest[z]: latest time of an active mark at z that starts a chain ending at the anchor
// before t, or -infinity.
std::vector<double> latest_start(Site x, const MarkSet& marks, double t, MarkFilter filter) {
  const BoxRegion& region = marks.region();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> latest(region.size(), kNegInf);
  if (!region.contains(x)) return latest;

  // Last active mark at `site` strictly before `before`.
  auto prev_mark = [&](std::size_t site, double before) {
    const auto list = marks.marks_at(site);
    for (auto it = list.rbegin(); it != list.rend(); ++it) {
      const Mark& m = marks[*it];
      if (m.time < before && mark_active(marks, *it, filter)) return m.time;
    }
    return kNegInf;
  };

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> queue;
  const std::size_t start = region.index_of(x);
  latest[start] = prev_mark(start, t);
  if (latest[start] > kNegInf) queue.emplace(latest[start], start);
  while (!queue.empty()) {
    const auto [a, idx] = queue.top();
    queue.pop();
    if (a < latest[idx]) continue;
    for (Site n : neighbors4(region.site_at(idx))) {
      if (!region.contains(n)) continue;
      const std::size_t j = region.index_of(n);
      const double b = prev_mark(j, a);
      if (b > latest[j]) {
        latest[j] = b;
        queue.emplace(b, j);
      }
    }
  }
  return latest;
}

}  // namespace

SupportSet backward_support(Site x, const MarkSet& marks, double t, MarkFilter filter) {
  SupportSet out;
  out.anchor = x;
  const BoxRegion& region = marks.region();
  if (!region.contains(x)) {
    out.members.push_back(x);
    return out;
  }
  const auto latest = latest_start(x, marks, t, filter);
  const std::size_t anchor_idx = region.index_of(x);
  for (std::size_t i = 0; i < latest.size(); ++i) {
    if (i == anchor_idx || std::isfinite(latest[i])) out.members.push_back(region.site_at(i));
  }
  return out;
}

std::vector<Site> dependency_set(Site x, const MarkSet& marks, double t) {
  const BoxRegion& region = marks.region();
  if (!region.contains(x)) return {x};
  const auto latest = latest_start(x, marks, t, MarkFilter::kAll);
  std::vector<std::uint8_t> in(region.size(), 0);
  in[region.index_of(x)] = 1;
  for (std::size_t i = 0; i < latest.size(); ++i) {
    if (!std::isfinite(latest[i])) continue;
    in[i] = 1;
    for (Site n : neighbors4(region.site_at(i))) {
      if (region.contains(n)) in[region.index_of(n)] = 1;
    }
  }
  std::vector<Site> out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] != 0) out.push_back(region.site_at(i));
  }
  return out;
}

namespace {

class BackwardExplorer {
 public:
  BackwardExplorer(const MarkSet& marks, const SeedField& seeds, double rho,
                   const GlauberParams& params)
      : marks_(marks), seeds_(seeds), rho_(rho), horizon_(params.horizon), table_(params.beta) {}

  // Spin of `site` just before global mark position `before`.
  int state_before(std::size_t site, std::size_t before) {
    const auto list = marks_.marks_at(site);
    auto it = std::lower_bound(list.begin(), list.end(), static_cast<std::uint32_t>(before));
    while (it != list.begin()) {
      --it;
      const Mark& m = marks_[*it];
      if (m.keep && m.time <= horizon_) return value_after(*it);
    }
    return spin_from_seed(seeds_[site], rho_).value();
  }

  // Spin right after the kept mark with global index `root` fires.
  int value_after(std::uint32_t root) {
    if (auto hit = memo_.find(root); hit != memo_.end()) return hit->second;
    struct Frame {
      std::uint32_t mark;
      int next = 0;
      int sum = 0;
    };
    std::vector<Frame> stack{{root}};
    int result = 0;
    bool have_result = false;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (have_result) {
        f.sum += result;
        have_result = false;
        ++f.next;
      }
      const Mark& m = marks_[f.mark];
      if (f.next == 0 && table_.is_death(m.rate_uniform)) {
        result = m.rate_uniform <= table_.accept(-4) ? 1 : -1;
        memo_.emplace(f.mark, result);
        stack.pop_back();
        have_result = true;
        continue;
      }
      bool pushed = false;
      while (f.next < 4) {
        const Site n = m.site + kSteps4[static_cast<std::size_t>(f.next)];
        if (!marks_.region().contains(n)) {
          throw SupportEscaped("backward exploration left the sampled region");
        }
        const std::size_t ni = marks_.region().index_of(n);
        const auto child = last_kept_before(ni, f.mark);
        if (!child) {
          f.sum += spin_from_seed(seeds_[ni], rho_).value();
          ++f.next;
          continue;
        }
        if (auto hit = memo_.find(*child); hit != memo_.end()) {
          f.sum += hit->second;
          ++f.next;
          continue;
        }
        stack.push_back({*child});
        pushed = true;
        break;
      }
      if (pushed) continue;
      result = m.rate_uniform <= table_.accept(f.sum) ? 1 : -1;
      memo_.emplace(f.mark, result);
      stack.pop_back();
      have_result = true;
    }
    return result;
  }

 private:
  std::optional<std::uint32_t> last_kept_before(std::size_t site, std::uint32_t before) const {
    const auto list = marks_.marks_at(site);
    auto it = std::lower_bound(list.begin(), list.end(), before);
    while (it != list.begin()) {
      --it;
      const Mark& m = marks_[*it];
      if (m.keep && m.time <= horizon_) return *it;
    }
    return std::nullopt;
  }

  const MarkSet& marks_;
  const SeedField& seeds_;
  double rho_;
  double horizon_;
  UpdateTable table_;
  std::unordered_map<std::uint32_t, int> memo_;
};

}  // namespace

Spin backward_explore_value(Site x, const MarkSet& marks, const SeedField& seeds, double rho,
                            const GlauberParams& params) {
  params.validate();
  if (!(seeds.region() == marks.region())) {
    throw std::invalid_argument("seeds and marks cover different regions");
  }
  if (!marks.region().contains(x)) throw std::out_of_range("site outside sampled region");
  BackwardExplorer explorer(marks, seeds, rho, params);
  const int v = explorer.state_before(marks.region().index_of(x), marks.size());
  return v > 0 ? Spin::plus() : Spin::minus();
}

double gw_offspring_prob(double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (std::isinf(beta)) return 1.0;
  return std::tanh(4.0 * beta);
}

ThresholdField min_rho_map(const SeedField& seeds, const MarkSet& marks,
                           const GlauberParams& params, BoundaryCondition bc,
                           const BoxRegion& window) {
  const BoxRegion& region = seeds.region();
  check_inputs(region, marks, params, window);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // theta[x]: the site is +1 exactly for rho > theta[x].
  std::vector<double> theta(seeds.uniforms().begin(), seeds.uniforms().end());
  const UpdateTable table(params.beta);
  const int outside = boundary_value(bc);

  std::array<double, 4> nb{};
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const Mark& m = marks[i];
    if (m.time > params.horizon) break;
    if (!m.keep) continue;
    int fixed = 0;
    int count = 0;
    for (Site step : kSteps4) {
      const Site n = m.site + step;
      if (region.contains(n)) {
        nb[static_cast<std::size_t>(count++)] = theta[region.index_of(n)];
      } else {
        fixed += outside;
      }
    }
    // Smallest number c of plus neighbors that makes the update accept.
    int c = 0;
    while (c <= count && !(m.rate_uniform <= table.accept(fixed + 2 * c - count))) ++c;
    double& th = theta[region.index_of(m.site)];
    if (c == 0) {
      th = -kInf;
    } else if (c > count) {
      th = kInf;
    } else {
      std::nth_element(nb.begin(), nb.begin() + (c - 1), nb.begin() + count);
      th = nb[static_cast<std::size_t>(c - 1)];
    }
  }

  ThresholdField out{window, std::vector<double>(window.size())};
  for (std::size_t i = 0; i < window.size(); ++i) {
    const double v = theta[region.index_of(window.site_at(i))];
    out.values[i] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

}  // namespace spinperc
