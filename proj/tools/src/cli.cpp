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

#include "spinperc_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spinperc/bootstrap.hpp"
#include "spinperc/errors.hpp"
#include "spinperc/estimators.hpp"
#include "spinperc/geometry.hpp"
#include "spinperc/osss.hpp"
#include "spinperc/rng.hpp"
#include "spinperc_cli/output.hpp"
#include "spinperc_cli/version.hpp"

namespace spinperc::cli {

namespace {

struct Common {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out = ".";
  std::int32_t margin = -1;
};

struct CrossingOpts {
  std::string model = "glauber";
  double beta = 1.0;
  double tau = 1.0;
  std::uint32_t k = 1;
  std::vector<double> rho{0.5};
  std::vector<double> t{1.0};
  std::string rate_table;
  double epsilon = 0.1;
  std::int32_t n = 8;
  std::int32_t m = -1;
  std::uint64_t replicates = 1000;
};

struct RcOpts {
  double beta = 10.0;
  std::vector<double> tau{0.0, 0.5, 1.0, 2.0, 4.0};
  std::uint32_t k = 1;
  std::int32_t n = 64;
  std::int32_t m = -1;
  std::uint64_t replicates = 400;
  int iterations = 20;
};

struct HeatmapOpts {
  double beta = 3.0;
  double tau = 6.0;
  std::uint32_t k = 1;
  std::int32_t width = 64;
  std::int32_t height = 64;
  std::string bc = "free";
};

struct BootstrapOpts {
  std::string rate_table;
  double epsilon = 0.1;
  std::int32_t n = 16;
  std::int32_t m = -1;
  double horizon = 20.0;
  std::uint32_t k = 1;
  std::uint64_t replicates = 200;
  std::uint64_t sandwich_replicates = 100;
};

struct OsssOpts {
  std::string mode = "exact";
  double beta = 1.0;
  double tau = 0.5;
  std::uint32_t k = 2;
  std::int32_t n = 2;
  std::int32_t m = -1;
  std::int32_t window_margin = 0;
  double rho = 0.5;
  std::uint64_t replicates = 10000;
  std::int32_t radius = -1;
  bool influences = true;
};

struct DecayOpts {
  double beta = 1.0;
  double tau = 1.0;
  std::uint32_t k = 1;
  double rho = 0.5;
  std::vector<std::int32_t> distances{0, 1, 2, 4, 6, 8};
  std::uint64_t replicates = 2000;
};

struct QuenchedArmOpts {
  double beta = 1.0;
  double tau = 1.0;
  std::uint32_t k = 4;
  double rho = 0.5;
  std::int32_t m = 1;
  std::int32_t n = 8;
  std::uint64_t outer = 50;
  std::uint64_t inner = 50;
};

struct ThinningOpts {
  double beta = 1.0;
  double tau = 0.5;
  double rho = 0.5;
  std::int32_t n = 15;
  std::int32_t m = -1;
  std::vector<std::uint32_t> k{2, 8, 32};
  std::uint64_t outer = 500;
  std::uint64_t inner = 200;
};

[[noreturn]] void invalid(const std::string& what) { throw ConfigError(what); }

void require(bool ok, const std::string& what) {
  if (!ok) invalid(what);
}

GlauberParams glauber(double beta, double tau, std::uint32_t k) {
  GlauberParams p{beta, tau, k};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
  return p;
}

void require_probability(double rho, const char* name) {
  require(rho >= 0.0 && rho <= 1.0, std::string(name) + " must lie in [0, 1]");
}

std::int32_t height_or_width(std::int32_t m, std::int32_t n) { return m < 0 ? n : m; }

RateTable rate_table_of(const std::string& path, double epsilon) {
  if (!path.empty()) return load_rate_table(path);
  require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1]");
  return RateTable::counting(epsilon);
}

BoundaryCondition bc_of(const std::string& name) {
  if (name == "plus") return BoundaryCondition::kAllPlus;
  if (name == "minus") return BoundaryCondition::kAllMinus;
  if (name == "free") return BoundaryCondition::kFree;
  invalid("bc must be plus, minus or free");
}

RunOptions run_options(const Common& c) {
  RunOptions o;
  o.threads = c.threads;
  o.margin.initial = c.margin;
  return o;
}

void cmd_crossing(const RunContext& ctx, const Common& c, const CrossingOpts& o, std::ostream& log) {
  const std::int32_t m = height_or_width(o.m, o.n);
  require(o.n >= 0 && m >= 0, "box sides must be >= 0");
  require(o.replicates >= 2, "need at least two replicates");
  const RunOptions ro = run_options(c);
  if (o.model == "glauber") {
    const GlauberParams p = glauber(o.beta, o.tau, o.k);
    for (double rho : o.rho) require_probability(rho, "rho");
    EstimateTable table(ctx, "crossing.csv");
    for (double rho : o.rho) {
      const Estimate e = estimate_crossing(p, rho, o.n, m, o.replicates, c.seed, ro);
      table.add({"crossing", o.beta, o.tau, rho, o.n, m, e.mean, e.std_error, e.replicates});
      log << "rho=" << rho << " P=" << e.mean << " +- " << e.std_error << "\n";
    }
    table.close();
  } else if (o.model == "bootstrap") {
    const RateTable rt = rate_table_of(o.rate_table, o.epsilon);
    require(!o.t.empty(), "t grid is empty");
    for (double t : o.t) require(t >= 0.0, "t must be >= 0");
    require(o.k >= 1, "thickening must be >= 1");
    const double horizon = *std::max_element(o.t.begin(), o.t.end());
    const ThresholdSample s =
        t_threshold_sample(rt, o.n, m, horizon, o.k, o.replicates, c.seed, ro);
    EstimateTable table(ctx, "crossing.csv");
    for (double t : o.t) {
      MomentAccumulator acc;
      for (double v : s.values) acc.add(v <= t ? 1.0 : 0.0);
      const Estimate e = acc.estimate();
      table.add({"crossing", std::nan(""), 0.0, t, o.n, m, e.mean, e.std_error, e.replicates});
      log << "t=" << t << " P=" << e.mean << " +- " << e.std_error << "\n";
    }
    table.close();
  } else {
    invalid("model must be glauber or bootstrap");
  }
}

void cmd_rc(const RunContext& ctx, const Common& c, const RcOpts& o, std::ostream& log) {
  const std::int32_t m = height_or_width(o.m, o.n);
  require(o.n >= 0 && m >= 0, "box sides must be >= 0");
  require(o.replicates >= 1, "need at least one replicate");
  require(o.iterations >= 1 && o.iterations <= 60, "iterations must lie in [1, 60]");
  for (double tau : o.tau) glauber(o.beta, tau, o.k);
  const RunOptions ro = run_options(c);
  EstimateTable table(ctx, "rc.csv");
  CsvWriter ci(ctx, "rc_ci.csv", {"tau", "median", "ci_low", "ci_high", "replicates"});
  for (double tau : o.tau) {
    const ThresholdSample s =
        rho_threshold_sample(glauber(o.beta, tau, o.k), o.n, m, o.replicates, c.seed, ro, o.iterations);
    const MedianEstimate med = s.median();
    table.add({"rho_c", o.beta, tau, med.median, o.n, m, med.median, med.std_error, med.replicates});
    ci.row({format_double(tau), format_double(med.median), format_double(med.ci_low),
            format_double(med.ci_high), std::to_string(med.replicates)});
    log << "tau=" << tau << " rho_c=" << med.median << " [" << med.ci_low << ", " << med.ci_high
        << "]\n";
  }
  table.close();
  ci.close();
}

void cmd_heatmap(const RunContext& ctx, const Common& c, const HeatmapOpts& o, std::ostream& log) {
  const GlauberParams p = glauber(o.beta, o.tau, o.k);
  require(o.width >= 1 && o.height >= 1, "width and height must be >= 1");
  const BoundaryCondition bc = bc_of(o.bc);
  const BoxRegion window({0, 0}, o.width, o.height);
  const ThresholdField field = heatmap(p, bc, window, c.seed);

  std::ofstream pgm(ctx.path("heatmap.pgm"), std::ios::binary | std::ios::trunc);
  if (!pgm) throw std::runtime_error("cannot open heatmap.pgm");
  std::string comment;
  for (const std::string& line : ctx.header_lines()) comment += line + "\n";
  write_pgm(field, pgm, comment);
  pgm.close();

  CsvWriter raw(ctx, "heatmap.csv", {"x", "y", "threshold"});
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const Site s = window.site_at(i);
    raw.row({std::to_string(s.x), std::to_string(s.y), format_double(field.values[i])});
  }
  raw.close();

  const double lag1 = lag1_autocorrelation(field.values, window);
  const Estimate mean = estimate_of(field.values);
  CsvWriter stats(ctx, "heatmap_stats.csv", {"statistic", "value"});
  stats.row({"lag1_autocorrelation", format_double(lag1)});
  stats.row({"mean_threshold", format_double(mean.mean)});
  stats.close();
  log << "lag1 autocorrelation " << lag1 << "\n";
}

void cmd_bootstrap(const RunContext& ctx, const Common& c, const BootstrapOpts& o, std::ostream& log) {
  const RateTable rt = rate_table_of(o.rate_table, o.epsilon);
  const std::int32_t m = height_or_width(o.m, o.n);
  require(o.n >= 0 && m >= 0, "box sides must be >= 0");
  require(o.horizon > 0.0, "horizon must be > 0");
  require(o.k >= 1, "thickening must be >= 1");
  require(o.replicates >= 1, "need at least one replicate");
  const RunOptions ro = run_options(c);
  const double eps = rt.epsilon();
  const RateTable one = RateTable::constant(1.0);
  const RateTable lower = RateTable::constant(eps);

  const ThresholdSample tl = t_threshold_sample(rt, o.n, m, o.horizon, o.k, o.replicates, c.seed, ro);
  const ThresholdSample t1 = t_threshold_sample(one, o.n, m, o.horizon, o.k, o.replicates, c.seed, ro);
  GlauberParams bernoulli{0.0, 0.0, 1};
  const ThresholdSample rb = rho_threshold_sample(bernoulli, o.n, m, o.replicates, c.seed, ro);

  CsvWriter samples(ctx, "bootstrap_samples.csv", {"replicate", "t_lambda", "t_one"});
  for (std::size_t r = 0; r < tl.values.size(); ++r) {
    samples.row({std::to_string(r), format_double(tl.values[r]), format_double(t1.values[r])});
  }
  samples.close();

  // Pathwise sandwich on shared marks: constant 1 <= lambda <= constant epsilon, and the
  // time change of the constant tables.
  const BoxRegion box = BoxRegion::crossing_box(o.n, m);
  struct Check {
    std::uint64_t upper = 0;
    std::uint64_t lower = 0;
    std::uint64_t time_change = 0;
  };
  const auto checks = map_replicates(o.sandwich_replicates, ro.threads, [&](std::size_t r) {
    const MarkSet marks = sample_marks(box, o.horizon, o.k, derive_seed(c.seed, 0x5a4d), r);
    const FlipSchedule s1 = evolve_bootstrap(marks, one, box);
    const FlipSchedule sl = evolve_bootstrap(marks, rt, box);
    const FlipSchedule se = evolve_bootstrap(marks, lower, box);
    const FlipSchedule sc = evolve_bootstrap(time_change(marks, eps), lower, box);
    Check ch;
    for (std::size_t i = 0; i < box.size(); ++i) {
      ch.upper += !(s1.flip_times[i] <= sl.flip_times[i]);
      ch.lower += !(sl.flip_times[i] <= se.flip_times[i]);
      const double scaled = s1.flip_times[i] == kNever ? kNever : s1.flip_times[i] / eps;
      ch.time_change += sc.flip_times[i] != scaled;
    }
    return ch;
  });
  Check total;
  for (const Check& ch : checks) {
    total.upper += ch.upper;
    total.lower += ch.lower;
    total.time_change += ch.time_change;
  }

  const MedianEstimate ml = tl.median();
  const MedianEstimate m1 = t1.median();
  const MedianEstimate mb = rb.median();
  auto to_p = [](double t) { return t == kNever ? 1.0 : -std::expm1(-t); };
  const double nan = std::nan("");
  EstimateTable table(ctx, "bootstrap.csv");
  table.add({"t_c_lambda", nan, o.horizon, ml.median, o.n, m, ml.median, ml.std_error, ml.replicates});
  table.add({"t_c_one", nan, o.horizon, m1.median, o.n, m, m1.median, m1.std_error, m1.replicates});
  table.add({"p_from_t_c_one", nan, o.horizon, to_p(m1.median), o.n, m, to_p(m1.median),
             (to_p(m1.ci_high) - to_p(m1.ci_low)) / (2.0 * kZ95), m1.replicates});
  table.add({"rho_c_bernoulli", nan, 0.0, mb.median, o.n, m, mb.median, mb.std_error, mb.replicates});
  const auto sites = static_cast<double>(o.sandwich_replicates * box.size());
  table.add({"sandwich_upper_violations", nan, o.horizon, eps, o.n, m,
             static_cast<double>(total.upper), 0.0, o.sandwich_replicates});
  table.add({"sandwich_lower_violations", nan, o.horizon, eps, o.n, m,
             static_cast<double>(total.lower), 0.0, o.sandwich_replicates});
  table.add({"time_change_mismatches", nan, o.horizon, eps, o.n, m,
             static_cast<double>(total.time_change), 0.0, o.sandwich_replicates});
  table.close();
  log << "t_c(lambda)=" << ml.median << " t_c(1)=" << m1.median << " -> p=" << to_p(m1.median)
      << " rho_c(Bernoulli)=" << mb.median << " sandwich violations "
      << total.upper + total.lower + total.time_change << " over " << sites << " sites\n";
}

void cmd_osss(const RunContext& ctx, const Common& c, const OsssOpts& o, std::ostream& log) {
  const GlauberParams p = glauber(o.beta, o.tau, o.k);
  const std::int32_t m = height_or_width(o.m, o.n);
  require(o.n >= 0 && m >= 0, "box sides must be >= 0");
  require(o.window_margin >= 0, "window-margin must be >= 0");
  require_probability(o.rho, "rho");
  require(o.mode == "exact" || o.mode == "mc", "mode must be exact or mc");
  if (o.mode == "mc") require(o.replicates >= 2, "need at least two replicates");
  const BoxRegion box = BoxRegion::crossing_box(o.n, m);
  const BoxRegion window = box.expanded(o.window_margin);
  const QuenchedInstance inst = sample_instance(window, box, p, c.seed, 0);
  if (o.mode == "exact" && inst.variable_count() > kMaxExactVariables) {
    invalid("exact audit supports at most " + std::to_string(kMaxExactVariables) +
            " binary variables; the sampled instance has " +
            std::to_string(inst.variable_count()) + " (" + std::to_string(inst.site_count()) +
            " sites, " + std::to_string(inst.mark_count()) + " marks)");
  }
  const RunOptions ro = run_options(c);
  const AuditReport r = o.mode == "exact"
                            ? exact_audit(inst, o.rho, o.radius, ro)
                            : monte_carlo_audit(inst, o.rho, o.replicates, c.seed, o.influences,
                                                o.radius, ro);

  CsvWriter vars(ctx, "osss_variables.csv",
                 {"kind", "id", "x", "y", "time", "revealment", "revealment_se", "influence",
                  "influence_se"});
  for (const VariableAudit& v : r.variables) {
    vars.row({v.kind == VariableAudit::Kind::kSite ? "site" : "mark", std::to_string(v.id),
              std::to_string(v.site.x), std::to_string(v.site.y), format_double(v.time),
              format_double(v.revealment), format_double(v.revealment_se),
              format_double(v.influence), format_double(v.influence_se)});
  }
  vars.close();

  nlohmann::ordered_json header;
  const auto lines = ctx.header_lines();
  header["comment"] = lines.front();
  header["config"] = std::vector<std::string>(lines.begin() + 1, lines.end());
  nlohmann::ordered_json j;
  j["_header"] = header;
  j["mode"] = o.mode;
  j["rho"] = r.rho;
  j["thickening"] = r.thickening;
  j["sites"] = inst.site_count();
  j["marks"] = inst.mark_count();
  j["good_event"] = good_event(inst, o.radius).holds;
  j["replicates"] = r.replicates;
  j["probability"] = r.probability;
  j["probability_se"] = r.probability_se;
  j["variance"] = r.variance;
  j["variance_se"] = r.variance_se;
  j["russo_lhs"] = r.russo_lhs;
  j["russo_rhs"] = r.russo_rhs;
  j["osss_lhs"] = r.osss_lhs;
  j["osss_rhs"] = r.osss_rhs;
  j["osss_holds"] = r.osss_lhs <= r.osss_rhs;
  j["max_site_revealment"] = r.max_site_revealment;
  std::ofstream js(ctx.path("osss_summary.json"), std::ios::binary | std::ios::trunc);
  if (!js) throw std::runtime_error("cannot open osss_summary.json");
  js << j.dump(2) << '\n';
  js.close();
  log << "P=" << r.probability << " Var=" << r.variance << " OSSS rhs=" << r.osss_rhs
      << " Russo " << r.russo_lhs << " vs " << r.russo_rhs << "\n";
}

void cmd_decay(const RunContext& ctx, const Common& c, const DecayOpts& o, std::ostream& log) {
  const GlauberParams p = glauber(o.beta, o.tau, o.k);
  require_probability(o.rho, "rho");
  require(o.replicates >= 2, "need at least two replicates");
  for (std::int32_t d : o.distances) require(d >= 0, "distances must be >= 0");
  const auto est = covariance_decay(p, o.rho, o.distances, o.replicates, c.seed, run_options(c));
  EstimateTable table(ctx, "decay.csv");
  for (std::size_t i = 0; i < est.size(); ++i) {
    table.add({"covariance", o.beta, o.tau, o.rho, o.distances[i], 0, est[i].mean,
               est[i].std_error, est[i].replicates});
    log << "d=" << o.distances[i] << " cov=" << est[i].mean << " +- " << est[i].std_error << "\n";
  }
  table.close();
}

void cmd_quenched_arm(const RunContext& ctx, const Common& c, const QuenchedArmOpts& o,
                      std::ostream& log) {
  const GlauberParams p = glauber(o.beta, o.tau, o.k);
  require_probability(o.rho, "rho");
  require(o.m >= 0 && o.m < o.n, "arm radii need 0 <= m < n");
  require(o.outer >= 2 && o.inner >= 1, "need outer >= 2 and inner >= 1");
  const QuenchedArmSummary s =
      quenched_arm_estimate(p, o.rho, o.m, o.n, o.outer, o.inner, c.seed, run_options(c));
  EstimateTable table(ctx, "quenched_arm.csv");
  table.add({"annealed", o.beta, o.tau, o.rho, o.m, o.n, s.annealed.mean, s.annealed.std_error,
             s.annealed.replicates});
  const std::pair<const char*, double> quantiles[] = {
      {"quenched_q50", s.q50}, {"quenched_q90", s.q90}, {"quenched_q99", s.q99}, {"quenched_max", s.max}};
  for (const auto& [name, v] : quantiles) {
    table.add({name, o.beta, o.tau, o.rho, o.m, o.n, v, std::nan(""), o.outer});
  }
  table.close();
  CsvWriter samples(ctx, "quenched_arm_samples.csv", {"skeleton", "probability"});
  for (std::size_t i = 0; i < s.quenched.size(); ++i) {
    samples.row({std::to_string(i), format_double(s.quenched[i])});
  }
  samples.close();
  log << "annealed " << s.annealed.mean << " q99 " << s.q99 << " max " << s.max << "\n";
}

void cmd_thinning(const RunContext& ctx, const Common& c, const ThinningOpts& o, std::ostream& log) {
  glauber(o.beta, o.tau, 1);
  require_probability(o.rho, "rho");
  const std::int32_t m = height_or_width(o.m, o.n);
  require(o.n >= 0 && m >= 0, "box sides must be >= 0");
  require(!o.k.empty(), "k list is empty");
  for (std::uint32_t k : o.k) require(k >= 1, "thickening must be >= 1");
  require(o.outer >= 2 && o.inner >= 2, "need outer >= 2 and inner >= 2");
  const auto rows = thinning_variance_check(GlauberParams{o.beta, o.tau, 1}, o.rho, o.n, m, o.k,
                                            o.outer, o.inner, c.seed, run_options(c));
  CsvWriter csv(ctx, "thinning.csv",
                {"k", "var_z", "stderr", "debiased_var_z", "bound", "mean_z", "outer", "inner"});
  for (const ThinningRow& r : rows) {
    csv.row({std::to_string(r.k), format_double(r.variance.mean),
             format_double(r.variance.std_error), format_double(r.debiased_variance),
             format_double(1.0 / r.k), format_double(r.mean_z), std::to_string(r.outer),
             std::to_string(r.inner)});
    log << "k=" << r.k << " Var(Z)=" << r.variance.mean << " +- " << r.variance.std_error
        << " (1/k=" << 1.0 / r.k << ")\n";
  }
  csv.close();
}

void add_glauber_options(CLI::App* s, double& beta, double& tau) {
  s->add_option("--beta", beta, "Inverse temperature (inf allowed)");
  s->add_option("--tau", tau, "Time horizon");
}

// Keys that never change results; excluded from the embedded config and its hash.
bool result_neutral(const std::string& line) {
  const std::string key = line.substr(0, line.find('='));
  return key == "out" || key == "threads" || key == "config";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
  CLI::App app{"Simulation lab for dependent planar percolation driven by spin dynamics",
               "spinperc"};
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "TOML configuration file; flags override it");
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  app.add_option("--seed", common.seed, "Master seed");
  app.add_option("--threads", common.threads, "Worker threads (0 = all logical processors)");
  app.add_option("--out", common.out, "Output directory");
  app.add_option("--margin", common.margin, "Initial certification margin (-1 = default)");

  CrossingOpts crossing;
  auto* sc = app.add_subcommand("crossing", "Crossing probabilities over a rho or t grid");
  sc->add_option("--model", crossing.model, "glauber or bootstrap");
  add_glauber_options(sc, crossing.beta, crossing.tau);
  sc->add_option("--k", crossing.k, "Thickening");
  sc->add_option("--rho", crossing.rho, "Initial densities")->delimiter(',');
  sc->add_option("--t", crossing.t, "Times (bootstrap model)")->delimiter(',');
  sc->add_option("--rate-table", crossing.rate_table, "Rate table file (bootstrap model)");
  sc->add_option("--epsilon", crossing.epsilon, "Epsilon of the default counting table");
  sc->add_option("--n", crossing.n, "Box is [0,n] x [0,m]");
  sc->add_option("--m", crossing.m, "Box height (-1 = n)");
  sc->add_option("--replicates", crossing.replicates);

  RcOpts rc;
  auto* sr = app.add_subcommand("rc", "Median pathwise rho thresholds across a tau grid");
  sr->add_option("--beta", rc.beta, "Inverse temperature (inf allowed)");
  sr->add_option("--tau", rc.tau, "Horizons")->delimiter(',');
  sr->add_option("--k", rc.k, "Thickening");
  sr->add_option("--n", rc.n);
  sr->add_option("--m", rc.m, "Box height (-1 = n)");
  sr->add_option("--replicates", rc.replicates);
  sr->add_option("--iterations", rc.iterations, "Bisection steps per replicate");

  HeatmapOpts hm;
  auto* sh = app.add_subcommand("heatmap", "Per-site minimum rho giving +1 at tau");
  add_glauber_options(sh, hm.beta, hm.tau);
  sh->add_option("--k", hm.k, "Thickening");
  sh->add_option("--width", hm.width);
  sh->add_option("--height", hm.height);
  sh->add_option("--bc", hm.bc, "plus, minus or free");

  BootstrapOpts bs;
  auto* sb = app.add_subcommand("bootstrap", "Bootstrap crossing times and the Bernoulli sandwich");
  sb->add_option("--rate-table", bs.rate_table, "Rate table file (default: counting table)");
  sb->add_option("--epsilon", bs.epsilon, "Epsilon of the default counting table");
  sb->add_option("--n", bs.n);
  sb->add_option("--m", bs.m, "Box height (-1 = n)");
  sb->add_option("--horizon", bs.horizon);
  sb->add_option("--k", bs.k, "Thickening");
  sb->add_option("--replicates", bs.replicates);
  sb->add_option("--sandwich-replicates", bs.sandwich_replicates);

  OsssOpts os;
  auto* so = app.add_subcommand("osss", "Revealment, influences, Russo and OSSS audit");
  so->add_option("--mode", os.mode, "exact or mc");
  add_glauber_options(so, os.beta, os.tau);
  so->add_option("--k", os.k, "Thickening");
  so->add_option("--n", os.n);
  so->add_option("--m", os.m, "Box height (-1 = n)");
  so->add_option("--window-margin", os.window_margin, "Sites of window around the box");
  so->add_option("--rho", os.rho);
  so->add_option("--replicates", os.replicates, "Monte Carlo replicates");
  so->add_option("--radius", os.radius, "Good-event radius (-1 = ceil(log n))");
  so->add_option("--influences", os.influences, "Estimate influences in mc mode");

  DecayOpts dc;
  auto* sd = app.add_subcommand("decay", "Covariance of sigma_tau(0) and sigma_tau((d,0))");
  add_glauber_options(sd, dc.beta, dc.tau);
  sd->add_option("--k", dc.k, "Thickening");
  sd->add_option("--rho", dc.rho);
  sd->add_option("--distances", dc.distances)->delimiter(',');
  sd->add_option("--replicates", dc.replicates);

  QuenchedArmOpts qa;
  auto* sq = app.add_subcommand("quenched-arm", "Arm probabilities conditional on the skeleton");
  add_glauber_options(sq, qa.beta, qa.tau);
  sq->add_option("--k", qa.k, "Thickening");
  sq->add_option("--rho", qa.rho);
  sq->add_option("--m", qa.m, "Inner radius");
  sq->add_option("--n", qa.n, "Outer radius");
  sq->add_option("--outer", qa.outer, "Skeletons");
  sq->add_option("--inner", qa.inner, "Draws per skeleton");

  ThinningOpts th;
  auto* st = app.add_subcommand("thinning-check", "Variance of the conditional crossing probability");
  add_glauber_options(st, th.beta, th.tau);
  st->add_option("--rho", th.rho);
  st->add_option("--n", th.n);
  st->add_option("--m", th.m, "Box height (-1 = n)");
  st->add_option("--k", th.k, "Thickenings")->delimiter(',');
  st->add_option("--outer", th.outer);
  st->add_option("--inner", th.inner);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    log << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    log << e.what() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "spinperc: " << e.what() << "\n";
    return kExitConfig;
  }

  RunContext ctx;
  ctx.command = app.get_subcommands().front()->get_name();
  ctx.seed = common.seed;
  ctx.threads = common.threads;
  ctx.out_dir = common.out;
  {
    std::istringstream in(app.config_to_str(true, false));
    std::string resolved;
    for (std::string line; std::getline(in, line);) {
      if (line.empty() || result_neutral(line)) continue;
      // Only the chosen command's options describe the run.
      const auto dot = line.find('.');
      const auto eq = line.find('=');
      if (dot != std::string::npos && dot < eq && line.compare(0, dot, ctx.command) != 0) continue;
      resolved += line + "\n";
    }
    ctx.resolved_config = resolved;
    ctx.config_hash = fnv1a64(resolved);
  }

  try {
    std::filesystem::create_directories(ctx.out_dir);
    if (ctx.command == "crossing") cmd_crossing(ctx, common, crossing, log);
    else if (ctx.command == "rc") cmd_rc(ctx, common, rc, log);
    else if (ctx.command == "heatmap") cmd_heatmap(ctx, common, hm, log);
    else if (ctx.command == "bootstrap") cmd_bootstrap(ctx, common, bs, log);
    else if (ctx.command == "osss") cmd_osss(ctx, common, os, log);
    else if (ctx.command == "decay") cmd_decay(ctx, common, dc, log);
    else if (ctx.command == "quenched-arm") cmd_quenched_arm(ctx, common, qa, log);
    else if (ctx.command == "thinning-check") cmd_thinning(ctx, common, th, log);
  } catch (const ConfigError& e) {
    err << "spinperc: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MarginExhausted& e) {
    err << "spinperc: aborted: " << e.what() << "\n";
    return kExitMargin;
  } catch (const std::exception& e) {
    err << "spinperc: error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace spinperc::cli
