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

#include "spinperc/osss.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinperc/rng.hpp"

namespace spinperc {

namespace {

MarkSet skeleton_up_to(const MarkSet& marks, double horizon) {
  std::vector<Mark> kept;
  for (const Mark& m : marks.marks()) {
    if (m.time > horizon) break;
    Mark c = m;
    c.keep = true;
    kept.push_back(c);
  }
  return MarkSet(marks.region(), horizon, marks.thickening(), std::move(kept));
}

}  // namespace

QuenchedInstance::QuenchedInstance(const BoxRegion& window, const BoxRegion& box,
                                   const GlauberParams& params, const MarkSet& skeleton,
                                   BoundaryCondition bc)
    : window_(window), box_(box), params_(params), bc_(bc) {
  params_.validate();
  if (!(skeleton.region() == window)) throw std::invalid_argument("skeleton must cover the window");
  if (!window.contains(box)) throw std::invalid_argument("box exceeds window");
  if (skeleton.horizon() < params.horizon) {
    throw std::invalid_argument("skeleton does not cover the horizon");
  }
  skeleton_ = skeleton_up_to(skeleton, params.horizon);
  params_.thickening = skeleton.thickening();

  const std::size_t nb = box.size();
  supports_.reserve(nb);
  query_sites_.resize(nb);
  query_marks_.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const Site x = box.site_at(b);
    supports_.push_back(backward_support(x, skeleton_, params_.horizon, MarkFilter::kAll));
    for (Site s : dependency_set(x, skeleton_, params_.horizon)) {
      query_sites_[b].push_back(static_cast<std::uint32_t>(window.index_of(s)));
    }
    for (Site s : supports_[b].members) {
      for (std::uint32_t gi : skeleton_.marks_at(window.index_of(s))) query_marks_[b].push_back(gi);
    }
    std::sort(query_marks_[b].begin(), query_marks_[b].end());
  }
}

QuenchedInstance sample_instance(const BoxRegion& window, const BoxRegion& box,
                                 const GlauberParams& params, std::uint64_t seed,
                                 std::uint64_t replicate, BoundaryCondition bc) {
  const MarkSet marks =
      sample_marks_or_empty(window, params.horizon, params.thickening, seed, replicate);
  return QuenchedInstance(window, box, params, marks, bc);
}

std::int32_t default_good_radius(const BoxRegion& box) {
  const double n = std::max(1, box.height() - 1);
  return static_cast<std::int32_t>(std::ceil(std::log(n)));
}

GoodEvent good_event(const QuenchedInstance& instance, std::int32_t radius) {
  if (radius < 0) radius = default_good_radius(instance.box());
  GoodEvent out;
  out.per_site.resize(instance.box().size());
  for (std::size_t b = 0; b < out.per_site.size(); ++b) {
    out.per_site[b] = instance.support(b).radius() <= radius;
    out.holds = out.holds && out.per_site[b];
  }
  return out;
}

namespace {

// Forward dynamics on the instance window without allocation in the loop.
class Evaluator {
 public:
  explicit Evaluator(const QuenchedInstance& inst)
      : inst_(inst), table_(inst.params().beta) {
    const BoxRegion& w = inst.window();
    switch (inst.bc()) {
      case BoundaryCondition::kAllPlus:
        outside_ = 1;
        break;
      case BoundaryCondition::kAllMinus:
        outside_ = -1;
        break;
      case BoundaryCondition::kFree:
        outside_ = 0;
        break;
    }
    const MarkSet& sk = inst.skeleton();
    updates_.reserve(sk.size());
    for (const Mark& m : sk.marks()) {
      Update u;
      u.site = static_cast<std::int32_t>(w.index_of(m.site));
      for (std::size_t d = 0; d < 4; ++d) {
        const Site n = m.site + kSteps4[d];
        u.nbr[d] = w.contains(n) ? static_cast<std::int32_t>(w.index_of(n)) : -1;
      }
      u.rate = m.rate_uniform;
      updates_.push_back(u);
    }
    const BoxRegion& box = inst.box();
    box_to_window_.resize(box.size());
    for (std::size_t b = 0; b < box.size(); ++b) {
      box_to_window_[b] = static_cast<std::uint32_t>(w.index_of(box.site_at(b)));
    }
  }

  // spins: +-1 per window site; keep: per mark.
  void run(const std::int8_t* spins, const std::uint8_t* keep, std::int8_t* state) const {
    std::copy(spins, spins + inst_.site_count(), state);
    for (std::size_t i = 0; i < updates_.size(); ++i) {
      if (keep[i] == 0) continue;
      const Update& u = updates_[i];
      int sum = 0;
      for (std::int32_t n : u.nbr) sum += n >= 0 ? state[n] : outside_;
      state[u.site] = u.rate <= table_.accept(sum) ? 1 : -1;
    }
  }

  bool crosses(const std::int8_t* state) const {
    const BoxRegion& box = inst_.box();
    const auto w = static_cast<std::size_t>(box.width());
    const auto h = static_cast<std::size_t>(box.height());
    std::vector<std::uint8_t> seen(box.size(), 0);
    std::vector<std::uint32_t> stack;
    for (std::size_t y = 0; y < h; ++y) {
      const std::size_t b = y * w;
      if (state[box_to_window_[b]] > 0) {
        seen[b] = 1;
        stack.push_back(static_cast<std::uint32_t>(b));
      }
    }
    while (!stack.empty()) {
      const std::size_t b = stack.back();
      stack.pop_back();
      const std::size_t x = b % w;
      const std::size_t y = b / w;
      if (x + 1 == w) return true;
      const std::size_t cand[4] = {x + 1 < w ? b + 1 : b, y + 1 < h ? b + w : b,
                                   x > 0 ? b - 1 : b, y > 0 ? b - w : b};
      for (std::size_t c : cand) {
        if (c == b || seen[c] || state[box_to_window_[c]] <= 0) continue;
        seen[c] = 1;
        stack.push_back(static_cast<std::uint32_t>(c));
      }
    }
    return false;
  }

  std::uint32_t window_index(std::size_t box_index) const { return box_to_window_[box_index]; }

 private:
  struct Update {
    std::int32_t site = 0;
    std::array<std::int32_t, 4> nbr{};
    double rate = 0.0;
  };
  const QuenchedInstance& inst_;
  UpdateTable table_;
  int outside_ = 0;
  std::vector<Update> updates_;
  std::vector<std::uint32_t> box_to_window_;
};

struct Exploration {
  bool decision = false;
  std::vector<std::uint32_t> queried;
};

// Explores the +1 clusters of the box meeting column z, rows bottom to top, breadth first
// with neighbors in (E, N, W, S) order.
Exploration explore(const QuenchedInstance& inst, const Evaluator& ev, const std::int8_t* state,
                    std::int32_t z, bool good) {
  const BoxRegion& box = inst.box();
  Exploration out;
  if (!good) {
    out.queried.resize(box.size());
    for (std::size_t b = 0; b < box.size(); ++b) out.queried[b] = static_cast<std::uint32_t>(b);
    out.decision = ev.crosses(state);
    return out;
  }
  const auto w = static_cast<std::size_t>(box.width());
  const auto h = static_cast<std::size_t>(box.height());
  std::vector<std::uint8_t> queried(box.size(), 0);
  std::vector<std::uint8_t> in_cluster(box.size(), 0);
  auto query = [&](std::size_t b) {
    if (!queried[b]) {
      queried[b] = 1;
      out.queried.push_back(static_cast<std::uint32_t>(b));
    }
    return state[ev.window_index(b)] > 0;
  };
  std::vector<std::uint32_t> queue;
  for (std::size_t y = 0; y < h; ++y) {
    const std::size_t start = y * w + static_cast<std::size_t>(z);
    if (!query(start) || in_cluster[start]) continue;
    in_cluster[start] = 1;
    queue.assign(1, static_cast<std::uint32_t>(start));
    bool left = false;
    bool right = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t b = queue[head];
      const std::size_t x = b % w;
      const std::size_t yy = b / w;
      left = left || x == 0;
      right = right || x + 1 == w;
      const bool ok[4] = {x + 1 < w, yy + 1 < h, x > 0, yy > 0};
      const std::size_t next[4] = {b + 1, b + w, b - 1, b - w};
      for (int d = 0; d < 4; ++d) {
        if (!ok[d]) continue;
        const std::size_t c = next[d];
        if (in_cluster[c]) continue;
        if (query(c)) {
          in_cluster[c] = 1;
          queue.push_back(static_cast<std::uint32_t>(c));
        }
      }
    }
    out.decision = out.decision || (left && right);
  }
  return out;
}

void check_assignment(const QuenchedInstance& inst, const Assignment& a) {
  if (a.spins.size() != inst.site_count() || a.keep.size() != inst.mark_count()) {
    throw std::invalid_argument("assignment does not match instance");
  }
}

std::vector<std::int8_t> spins_of(const Assignment& a) {
  std::vector<std::int8_t> s(a.spins.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<std::int8_t>(a.spins[i].value());
  return s;
}

}  // namespace

SpinField evaluate(const QuenchedInstance& instance, const Assignment& a) {
  check_assignment(instance, a);
  const Evaluator ev(instance);
  const auto spins = spins_of(a);
  std::vector<std::int8_t> state(instance.site_count());
  ev.run(spins.data(), a.keep.data(), state.data());
  SpinField out(instance.window());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = state[i] > 0 ? Spin::plus() : Spin::minus();
  return out;
}

AlgorithmRun run_algorithm(const QuenchedInstance& instance, const Assignment& a, std::int32_t z,
                           std::int32_t radius) {
  check_assignment(instance, a);
  if (z < 0 || z >= instance.box().width()) throw std::out_of_range("column outside box");
  const Evaluator ev(instance);
  const auto spins = spins_of(a);
  std::vector<std::int8_t> state(instance.site_count());
  ev.run(spins.data(), a.keep.data(), state.data());
  const Exploration ex = explore(instance, ev, state.data(), z, good_event(instance, radius).holds);
  AlgorithmRun out;
  out.decision = ex.decision;
  out.queried = ex.queried;
  out.revealed_sites.assign(instance.site_count(), 0);
  out.revealed_marks.assign(instance.mark_count(), 0);
  for (std::uint32_t b : ex.queried) {
    for (std::uint32_t s : instance.query_sites(b)) out.revealed_sites[s] = 1;
    for (std::uint32_t m : instance.query_marks(b)) out.revealed_marks[m] = 1;
  }
  return out;
}

namespace {

std::vector<VariableAudit> variable_rows(const QuenchedInstance& inst) {
  std::vector<VariableAudit> rows(inst.variable_count());
  for (std::size_t s = 0; s < inst.site_count(); ++s) {
    rows[s].kind = VariableAudit::Kind::kSite;
    rows[s].id = static_cast<std::uint32_t>(s);
    rows[s].site = inst.window().site_at(s);
  }
  for (std::size_t m = 0; m < inst.mark_count(); ++m) {
    VariableAudit& r = rows[inst.site_count() + m];
    r.kind = VariableAudit::Kind::kMark;
    r.id = static_cast<std::uint32_t>(m);
    r.site = inst.skeleton()[m].site;
    r.time = inst.skeleton()[m].time;
  }
  return rows;
}

void finish_report(AuditReport& r, std::size_t site_count) {
  r.osss_lhs = r.variance;
  double sum = 0.0;
  r.max_site_revealment = 0.0;
  for (std::size_t v = 0; v < r.variables.size(); ++v) {
    sum += r.variables[v].revealment * r.variables[v].influence;
    if (v < site_count) r.max_site_revealment = std::max(r.max_site_revealment, r.variables[v].revealment);
  }
  r.osss_rhs = 4.0 * sum;
}

}  // namespace

AuditReport exact_audit(const QuenchedInstance& instance, double rho, std::int32_t radius,
                        const RunOptions& opts) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
  const std::size_t ns = instance.site_count();
  const std::size_t nm = instance.mark_count();
  const std::size_t nv = ns + nm;
  if (nv > kMaxExactVariables) {
    throw std::invalid_argument("exact audit needs at most 24 binary variables, instance has " +
                                std::to_string(nv));
  }
  const double q = 1.0 / static_cast<double>(instance.params().thickening);
  const std::uint32_t site_mask = ns == 32 ? ~0U : ((1U << ns) - 1U);
  const std::uint32_t mark_mask = ((1U << nv) - 1U) & ~site_mask;
  std::vector<double> ws(ns + 1), wm(nm + 1);
  for (std::size_t j = 0; j <= ns; ++j) {
    ws[j] = std::pow(rho, static_cast<double>(j)) * std::pow(1.0 - rho, static_cast<double>(ns - j));
  }
  for (std::size_t j = 0; j <= nm; ++j) {
    wm[j] = std::pow(q, static_cast<double>(j)) * std::pow(1.0 - q, static_cast<double>(nm - j));
  }
  auto weight = [&](std::uint32_t a) {
    return ws[static_cast<std::size_t>(std::popcount(a & site_mask))] *
           wm[static_cast<std::size_t>(std::popcount(a & mark_mask))];
  };

  const Evaluator ev(instance);
  const bool good = good_event(instance, radius).holds;
  const std::size_t nb = instance.box().size();
  std::vector<std::uint32_t> query_mask(nb, 0);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::uint32_t s : instance.query_sites(b)) query_mask[b] |= 1U << s;
    for (std::uint32_t m : instance.query_marks(b)) query_mask[b] |= 1U << (ns + m);
  }
  const auto columns = instance.box().width();

  const std::size_t total = std::size_t{1} << nv;
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<std::uint8_t> f(total);
  struct Partial {
    std::vector<double> reveal;
  };
  const auto partials = map_replicates(chunks, opts.threads, [&](std::size_t c) {
    Partial p{std::vector<double>(nv, 0.0)};
    std::vector<std::int8_t> spins(ns), state(ns);
    std::vector<std::uint8_t> keep(nm);
    const std::size_t end = std::min(total, (c + 1) * kChunk);
    for (std::size_t ai = c * kChunk; ai < end; ++ai) {
      const auto a = static_cast<std::uint32_t>(ai);
      for (std::size_t s = 0; s < ns; ++s) spins[s] = (a >> s) & 1U ? 1 : -1;
      for (std::size_t m = 0; m < nm; ++m) keep[m] = (a >> (ns + m)) & 1U;
      ev.run(spins.data(), keep.data(), state.data());
      f[ai] = ev.crosses(state.data());
      const double w = weight(a) / static_cast<double>(columns);
      if (w == 0.0) continue;
      for (std::int32_t z = 0; z < columns; ++z) {
        const Exploration ex = explore(instance, ev, state.data(), z, good);
        std::uint32_t revealed = 0;
        for (std::uint32_t b : ex.queried) revealed |= query_mask[b];
        for (std::size_t v = 0; v < nv; ++v) {
          if ((revealed >> v) & 1U) p.reveal[v] += w;
        }
      }
    }
    return p;
  });

  AuditReport r;
  r.exact = true;
  r.rho = rho;
  r.thickening = instance.params().thickening;
  r.variables = variable_rows(instance);
  for (const Partial& p : partials) {
    for (std::size_t v = 0; v < nv; ++v) r.variables[v].revealment += p.reveal[v];
  }

  // P(rho) = sum_j A_j rho^j (1 - rho)^(ns - j), A_j over assignments with j plus spins.
  std::vector<double> coeff(ns + 1, 0.0);
  double prob = 0.0;
  for (std::size_t ai = 0; ai < total; ++ai) {
    if (!f[ai]) continue;
    const auto a = static_cast<std::uint32_t>(ai);
    prob += weight(a);
    coeff[static_cast<std::size_t>(std::popcount(a & site_mask))] +=
        wm[static_cast<std::size_t>(std::popcount(a & mark_mask))];
  }
  double derivative = 0.0;
  for (std::size_t j = 0; j <= ns; ++j) {
    const double dj = static_cast<double>(j);
    const double rest = static_cast<double>(ns - j);
    if (j > 0) derivative += coeff[j] * dj * std::pow(rho, dj - 1) * std::pow(1.0 - rho, rest);
    if (j < ns) derivative -= coeff[j] * rest * std::pow(rho, dj) * std::pow(1.0 - rho, rest - 1);
  }

  for (std::size_t v = 0; v < nv; ++v) {
    const std::uint32_t bit = 1U << v;
    double inf = 0.0;
    for (std::size_t ai = 0; ai < total; ++ai) {
      const auto a = static_cast<std::uint32_t>(ai);
      if (a & bit) continue;
      if (f[a] != f[a | bit]) inf += weight(a) + weight(a | bit);
    }
    r.variables[v].influence = inf;
  }

  r.probability = prob;
  r.variance = prob * (1.0 - prob);
  r.russo_lhs = derivative;
  r.russo_rhs = 0.0;
  for (std::size_t s = 0; s < ns; ++s) r.russo_rhs += r.variables[s].influence;
  finish_report(r, ns);
  return r;
}

AuditReport monte_carlo_audit(const QuenchedInstance& instance, double rho,
                              std::uint64_t replicates, std::uint64_t seed, bool with_influences,
                              std::int32_t radius, const RunOptions& opts) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
  if (replicates < 2) throw std::invalid_argument("need at least two replicates");
  const std::size_t ns = instance.site_count();
  const std::size_t nm = instance.mark_count();
  const std::size_t nv = ns + nm;
  const double q = 1.0 / static_cast<double>(instance.params().thickening);
  const Evaluator ev(instance);
  const bool good = good_event(instance, radius).holds;
  const auto columns = static_cast<std::uint64_t>(instance.box().width());

  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (replicates + kChunk - 1) / kChunk;
  struct Counts {
    std::uint64_t hits = 0;
    std::vector<std::uint32_t> reveal;
    std::vector<std::uint32_t> pivotal;
  };
  const auto counts = map_replicates(chunks, opts.threads, [&](std::size_t c) {
    Counts out{0, std::vector<std::uint32_t>(nv, 0),
               std::vector<std::uint32_t>(with_influences ? nv : 0, 0)};
    std::vector<std::int8_t> spins(ns), state(ns);
    std::vector<std::uint8_t> keep(nm), revealed(nv);
    const std::size_t end = std::min<std::size_t>(replicates, (c + 1) * kChunk);
    for (std::size_t r = c * kChunk; r < end; ++r) {
      RngStream rng(seed, {Purpose::kAlgorithm, r, 0, 0});
      for (auto& s : spins) s = rng.uniform() < rho ? 1 : -1;
      for (auto& k : keep) k = rng.bernoulli(q);
      const auto z = static_cast<std::int32_t>(rng.below(columns));
      ev.run(spins.data(), keep.data(), state.data());
      const bool f = ev.crosses(state.data());
      out.hits += f;
      const Exploration ex = explore(instance, ev, state.data(), z, good);
      std::fill(revealed.begin(), revealed.end(), 0);
      for (std::uint32_t b : ex.queried) {
        for (std::uint32_t s : instance.query_sites(b)) revealed[s] = 1;
        for (std::uint32_t m : instance.query_marks(b)) revealed[ns + m] = 1;
      }
      for (std::size_t v = 0; v < nv; ++v) out.reveal[v] += revealed[v];
      if (!with_influences) continue;
      for (std::size_t s = 0; s < ns; ++s) {
        spins[s] = static_cast<std::int8_t>(-spins[s]);
        ev.run(spins.data(), keep.data(), state.data());
        out.pivotal[s] += ev.crosses(state.data()) != f;
        spins[s] = static_cast<std::int8_t>(-spins[s]);
      }
      for (std::size_t m = 0; m < nm; ++m) {
        keep[m] ^= 1U;
        ev.run(spins.data(), keep.data(), state.data());
        out.pivotal[ns + m] += ev.crosses(state.data()) != f;
        keep[m] ^= 1U;
      }
    }
    return out;
  });

  const double n = static_cast<double>(replicates);
  auto se = [&](double p) { return std::sqrt(std::max(0.0, p * (1.0 - p)) / (n - 1.0)); };
  AuditReport r;
  r.exact = false;
  r.rho = rho;
  r.thickening = instance.params().thickening;
  r.replicates = replicates;
  r.variables = variable_rows(instance);
  std::uint64_t hits = 0;
  std::vector<std::uint64_t> reveal(nv, 0), pivotal(nv, 0);
  for (const Counts& c : counts) {
    hits += c.hits;
    for (std::size_t v = 0; v < nv; ++v) {
      reveal[v] += c.reveal[v];
      if (with_influences) pivotal[v] += c.pivotal[v];
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    auto& row = r.variables[v];
    row.revealment = static_cast<double>(reveal[v]) / n;
    row.revealment_se = se(row.revealment);
    if (with_influences) {
      row.influence = static_cast<double>(pivotal[v]) / n;
      row.influence_se = se(row.influence);
    } else {
      row.influence = std::numeric_limits<double>::quiet_NaN();
      row.influence_se = std::numeric_limits<double>::quiet_NaN();
    }
  }
  r.probability = static_cast<double>(hits) / n;
  r.probability_se = se(r.probability);
  r.variance = r.probability * (1.0 - r.probability) * n / (n - 1.0);
  r.variance_se = std::abs(1.0 - 2.0 * r.probability) * r.probability_se;
  r.russo_lhs = std::numeric_limits<double>::quiet_NaN();
  r.russo_rhs = 0.0;
  for (std::size_t s = 0; s < ns; ++s) r.russo_rhs += r.variables[s].influence;
  finish_report(r, ns);
  return r;
}

}  // namespace spinperc
