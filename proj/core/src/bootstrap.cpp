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

#include "spinperc/bootstrap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spinperc/errors.hpp"
#include "spinperc/geometry.hpp"

namespace spinperc {

namespace {

std::size_t rotate(std::size_t idx) {
  // (e, n, w, s) -> (s, e, n, w): each neighbor moves a quarter turn counter-clockwise.
  const bool c = (idx >> 4) & 1;
  const bool e = (idx >> 3) & 1;
  const bool n = (idx >> 2) & 1;
  const bool w = (idx >> 1) & 1;
  const bool s = idx & 1;
  return RateTable::index(c, s, e, n, w);
}

std::string describe(std::size_t idx) {
  std::ostringstream out;
  const char* names[] = {"c", "e", "n", "w", "s"};
  out << "(";
  for (int b = 0; b < 5; ++b) {
    out << (b ? " " : "") << names[b] << "=" << (((idx >> (4 - b)) & 1) ? "+1" : "-1");
  }
  out << ")";
  return out.str();
}

}  // namespace

RateTable RateTable::counting(double epsilon) {
  std::array<double, kSize> e{};
  for (std::size_t i = 0; i < kSize; ++i) {
    const int plus = std::popcount(static_cast<unsigned>(i & 0xF));
    e[i] = epsilon + (1.0 - epsilon) * plus / 4.0;
  }
  return RateTable(epsilon, e);
}

RateTable RateTable::constant(double value) {
  std::array<double, kSize> e{};
  e.fill(value);
  return RateTable(value, e);
}

std::vector<std::string> rate_table_violations(const RateTable& table) {
  std::vector<std::string> out;
  const double eps = table.epsilon();
  if (!(eps > 0.0 && eps <= 1.0)) out.push_back("epsilon must lie in (0, 1]");
  if (table.rate(0) != eps) out.push_back("lambda(all -1) must equal epsilon");
  if (table.rate(RateTable::kSize - 1) != 1.0) out.push_back("lambda(all +1) must equal 1");
  for (std::size_t i = 0; i < RateTable::kSize; ++i) {
    const double r = table.rate(i);
    if (!(r >= eps && r <= 1.0)) {
      out.push_back("lambda" + describe(i) + " outside [epsilon, 1]");
    }
  }
  for (std::size_t a = 0; a < RateTable::kSize; ++a) {
    for (std::size_t b = 0; b < RateTable::kSize; ++b) {
      if (a != b && (a & b) == a && table.rate(a) > table.rate(b)) {
        out.push_back("not monotone: lambda" + describe(a) + " > lambda" + describe(b));
      }
    }
  }
  for (std::size_t i = 0; i < RateTable::kSize; ++i) {
    const std::size_t r = rotate(i);
    if (table.rate(i) != table.rate(r)) {
      out.push_back("not rotation invariant: lambda" + describe(i) + " != lambda" + describe(r));
    }
  }
  return out;
}

RateTable parse_rate_table(const std::string& text) {
  std::array<double, RateTable::kSize> entries{};
  std::array<bool, RateTable::kSize> seen{};
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    int spins[5];
    double rate = 0.0;
    if (!(fields >> spins[0])) continue;
    for (int i = 1; i < 5; ++i) {
      if (!(fields >> spins[i])) {
        throw ConfigError("rate table line " + std::to_string(line_no) + ": expected 5 spins");
      }
    }
    if (!(fields >> rate)) {
      throw ConfigError("rate table line " + std::to_string(line_no) + ": missing rate");
    }
    std::size_t idx = 0;
    for (int s : spins) {
      if (s != 1 && s != -1) {
        throw ConfigError("rate table line " + std::to_string(line_no) + ": spins must be +1 or -1");
      }
      idx = (idx << 1) | (s > 0 ? 1U : 0U);
    }
    if (seen[idx]) {
      throw ConfigError("rate table line " + std::to_string(line_no) + ": duplicate configuration");
    }
    seen[idx] = true;
    entries[idx] = rate;
    ++count;
  }
  if (count != RateTable::kSize) {
    throw ConfigError("rate table needs 32 configurations, got " + std::to_string(count));
  }
  RateTable table(entries[0], entries);
  const auto violations = rate_table_violations(table);
  if (!violations.empty()) {
    std::string msg = "invalid rate table:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ConfigError(msg);
  }
  return table;
}

RateTable load_rate_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rate table " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_rate_table(text.str());
}

namespace {

struct BootstrapRun {
  std::vector<double> flip;    // over marks.region()
  std::vector<std::uint8_t> taint;
};

BootstrapRun run_bootstrap(const MarkSet& marks, const RateTable& table) {
  const BoxRegion& region = marks.region();
  BootstrapRun run{std::vector<double>(region.size(), kNever),
                   std::vector<std::uint8_t>(region.size(), 0)};
  for (const Mark& m : marks.marks()) {
    if (!m.keep) continue;
    const std::size_t idx = region.index_of(m.site);
    if (run.flip[idx] != kNever) continue;
    std::size_t config = 0;
    bool uncertain = false;
    for (Site step : kSteps4) {
      const Site n = m.site + step;
      bool plus = false;
      if (region.contains(n)) {
        const std::size_t j = region.index_of(n);
        plus = run.flip[j] != kNever;
        uncertain = uncertain || (!plus && run.taint[j] != 0);
      } else {
        uncertain = true;
      }
      config = (config << 1) | (plus ? 1U : 0U);
    }
    if (m.rate_uniform <= table.rate(config)) {
      run.flip[idx] = m.time;
    } else if (uncertain) {
      // A larger region could show more plus neighbors here and accept.
      run.taint[idx] = 1;
    }
  }
  return run;
}

}  // namespace

FlipSchedule evolve_bootstrap(const MarkSet& marks, const RateTable& table, const BoxRegion& window) {
  const BoxRegion& region = marks.region();
  if (!region.contains(window)) throw std::out_of_range("window exceeds sampled region");
  const BootstrapRun run = run_bootstrap(marks, table);
  FlipSchedule out{window, std::vector<double>(window.size()), true};
  for (std::size_t i = 0; i < window.size(); ++i) {
    const std::size_t j = region.index_of(window.site_at(i));
    out.flip_times[i] = run.flip[j];
    if (run.taint[j] != 0) out.exact = false;
  }
  return out;
}

SpinField field_at(const FlipSchedule& schedule, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
  SpinField out(schedule.region);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = schedule.flip_times[i] <= t ? Spin::plus() : Spin::minus();
  }
  return out;
}

double first_crossing_time(const FlipSchedule& schedule, const BoxRegion& box) {
  if (!schedule.region.contains(box)) throw std::out_of_range("box exceeds schedule region");
  std::vector<double> times(box.size());
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = schedule.at(box.site_at(i));
  return minimax_crossing(times, box);
}

MarkSet time_change(const MarkSet& marks, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  std::vector<Mark> out(marks.marks().begin(), marks.marks().end());
  for (Mark& m : out) {
    m.time /= epsilon;
    m.rate_uniform *= epsilon;
  }
  return MarkSet(marks.region(), marks.horizon() / epsilon, marks.thickening(), std::move(out));
}

CertifiedBootstrap sample_certified_bootstrap(const BoxRegion& window, double horizon,
                                              std::uint32_t thickening, const RateTable& table,
                                              std::uint64_t master_seed, std::uint64_t replicate,
                                              const MarginPolicy& policy) {
  std::int32_t margin = policy.initial >= 0 ? policy.initial : default_margin(horizon);
  for (int attempt = 0; attempt <= policy.max_doublings; ++attempt) {
    const BoxRegion region = window.expanded(margin);
    MarkSet marks = sample_marks_or_empty(region, horizon, thickening, master_seed, replicate);
    FlipSchedule schedule = evolve_bootstrap(marks, table, window);
    if (schedule.exact) return {std::move(marks), std::move(schedule), margin};
    margin = margin > 0 ? margin * 2 : 1;
  }
  throw MarginExhausted("bootstrap window not certified (replicate " + std::to_string(replicate) +
                        ")");
}

}  // namespace spinperc
