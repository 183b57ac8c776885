#include "cirw/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cirw/bounds.hpp"
#include "cirw/curvature.hpp"
#include "cirw/cutoff.hpp"
#include "cirw/heat_kernel.hpp"
#include "cirw/kernels.hpp"
#include "cirw/pmf.hpp"
#include "cirw/trajectory.hpp"

namespace cirw {

namespace {

void require_grid(const ExperimentConfig& cfg, const char* command) {
  if (cfg.t_grid.empty()) {
    throw ConfigError(std::string(command) + " requires a t_grid line");
  }
}

std::string conjugacy_name(ConjugacyStatus s) {
  switch (s) {
    case ConjugacyStatus::satisfied_trivially:
      return "satisfied-trivially";
    case ConjugacyStatus::satisfied:
      return "satisfied";
    case ConjugacyStatus::violated:
      return "violated";
    case ConjugacyStatus::unsupported:
      return "unsupported";
  }
  return "unknown";
}

void cmd_validate(const GroupSpec& g, const RateMeasure& mu, Report& out) {
  const ValidationReport v = validate_rate_measure(g, mu);
  out.columns = {"property", "value", "pass"};
  out.rows.push_back({"reversible", format_bool(v.reversible),
                      format_bool(v.reversible)});
  const bool conj_ok = v.conjugacy == ConjugacyStatus::satisfied ||
                       v.conjugacy == ConjugacyStatus::satisfied_trivially;
  out.rows.push_back(
      {"conjugacy_invariance", conjugacy_name(v.conjugacy),
       format_bool(conj_ok)});
  if (!v.violations.empty()) {
    const auto& [x, z] = v.violations.front();
    out.rows.push_back({"first_violation",
                        "x=" + g.to_string(x) + " z=" + g.to_string(z),
                        "false"});
  }
  out.rows.push_back(
      {"total_mass", format_double(v.total_mass), "true"});
  out.rows.push_back({"min_rate", format_double(v.min_rate), "true"});
  out.rows.push_back({"generator_count",
                      std::to_string(v.generator_count), "true"});
  out.pass = v.ok();
}

void cmd_heat(const GroupSpec& g, const RateMeasure& mu,
              const ExperimentConfig& cfg, Report& out) {
  require_grid(cfg, "heat");
  const std::vector<Pmf> kernels =
      heat_kernel_grid(g, mu, cfg.t_grid, cfg.kernel_tol);
  out.columns = {"t", "element", "probability"};
  double max_deficit = 0.0;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    const std::string t = format_double(cfg.t_grid[i]);
    for (const auto& [x, p] : kernels[i].entries()) {
      out.rows.push_back({t, g.to_string(x), format_double(p)});
    }
    max_deficit = std::max(max_deficit, kernels[i].deficit());
  }
  out.summary = "max_deficit = " + format_double(max_deficit);
  out.pass = true;
}

void cmd_stats(const GroupSpec& g, const RateMeasure& mu,
               const ExperimentConfig& cfg, Report& out) {
  require_grid(cfg, "stats");
  const std::vector<Pmf> kernels =
      heat_kernel_grid(g, mu, cfg.t_grid, cfg.kernel_tol);
  out.columns = {"t",   "support_size", "deficit", "entropy", "varentropy",
                 "q01", "q05",          "q10",     "q25",     "q50",
                 "q75", "q90",          "q95",     "q99"};
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    const InfoStats st = info_stats(kernels[i]);
    std::vector<std::string> row = {
        format_double(cfg.t_grid[i]),
        std::to_string(kernels[i].support_size()),
        format_double(st.deficit), format_double(st.entropy),
        format_double(st.varentropy)};
    for (const auto& quantile : st.info_quantiles) {
      row.push_back(format_double(quantile.second));
    }
    out.rows.push_back(std::move(row));
  }
  out.pass = true;
}

void cmd_curvature(const GroupSpec& g, const RateMeasure& mu, Report& out) {
  const ValidationReport v = validate_rate_measure(g, mu);
  const CurvatureReport c = bakry_emery_curvature(g, mu);
  out.columns = {"kappa_best",  "mu_min",     "order2_support",
                 "nonnegative", "ball1_size", "ball2_size",
                 "measure_ok"};
  out.rows.push_back({format_double(c.kappa_best), format_double(c.mu_min),
                      format_bool(c.order2_support),
                      format_bool(c.nonnegative),
                      std::to_string(c.ball1_size),
                      std::to_string(c.ball2_size), format_bool(v.ok())});
  out.pass = v.ok() && c.nonnegative;
}

std::vector<Element> change_of_measure_points(const GroupSpec& g,
                                              const RateMeasure& mu) {
  if (g.is_finite()) return enumerate_group(g).elements;
  // Infinite lattice: the identity plus a two-step ball.
  std::vector<Element> points = {g.identity()};
  const std::vector<Element> supp = mu.support();
  for (const Element& z : supp) points.push_back(z);
  for (const Element& z : supp) {
    for (const Element& w : supp) points.push_back(g.multiply(z, w));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

void cmd_verify_lemmas(const GroupSpec& g, const RateMeasure& mu,
                       const ExperimentConfig& cfg, Report& out) {
  require_grid(cfg, "verify-lemmas");
  out.columns = {"section", "instance", "value", "pass"};
  bool all = true;

  const double m = static_cast<double>(mu.support_size());
  std::size_t n_eff = cfg.insertion_n;
  while (n_eff > 0 && std::pow(m, double(n_eff + 1)) * double(n_eff + 1) > 1e7) {
    --n_eff;
  }
  for (const auto& gen : mu.generators()) {
    const Element& z = gen.first;
    const InsertionReport rep = verify_insertion(g, mu, n_eff, z);
    all = all && rep.ok();
    std::ostringstream instance;
    instance << "z=" << g.to_string(z) << " n=" << n_eff;
    out.rows.push_back({"insertion", instance.str(),
                        rep.ok() ? std::to_string(rep.insertions_checked)
                                 : rep.first_counterexample,
                        format_bool(rep.ok())});
  }

  for (double t : cfg.t_grid) {
    for (const auto& gen : mu.generators()) {
      const Element& z = gen.first;
      const CountLawReport rep =
          verify_poisson_count_law(g, mu, t, z, cfg.lemma_tol);
      all = all && rep.pass;
      std::ostringstream instance;
      instance << "t=" << format_double(t) << " z=" << g.to_string(z);
      out.rows.push_back({"poisson-count", instance.str(),
                          format_double(rep.max_deviation),
                          format_bool(rep.pass)});
    }
  }

  const std::vector<Element> points = change_of_measure_points(g, mu);
  for (double t : cfg.t_grid) {
    for (const auto& gen : mu.generators()) {
      const Element& z = gen.first;
      double max_gap = 0.0;
      for (const Element& x : points) {
        max_gap = std::max(
            max_gap,
            verify_change_of_measure(g, mu, t, x, z, cfg.lemma_tol).gap);
      }
      const bool pass = max_gap <= cfg.lemma_tol;
      all = all && pass;
      std::ostringstream instance;
      instance << "t=" << format_double(t) << " z=" << g.to_string(z);
      out.rows.push_back({"change-of-measure", instance.str(),
                          format_double(max_gap), format_bool(pass)});
    }
  }

  out.pass = all;
}

void cmd_bound_report(const GroupSpec& g, const RateMeasure& mu,
                      const ExperimentConfig& cfg, Report& out) {
  require_grid(cfg, "bound-report");
  const std::vector<BoundRow> rows =
      theorem_report(g, mu, cfg.t_grid, cfg.kernel_tol);
  out.columns = {"t",          "varentropy", "two_t_gamma_log", "sum_U",
                 "sum_V",      "sum_V_supp", "c43_bound",       "cd_bound",
                 "prior_factor", "prior_valid", "chain_ok"};
  bool all = true;
  for (const BoundRow& r : rows) {
    all = all && r.chain_ok;
    out.rows.push_back(
        {format_double(r.t), format_double(r.varentropy),
         format_double(r.two_t_gamma_log), format_double(r.sum_u),
         format_double(r.sum_v), format_double(r.sum_v_support),
         format_double(r.c43_bound), format_double(r.cd_bound),
         format_double(r.prior_factor), format_bool(r.prior_valid),
         format_bool(r.chain_ok)});
  }
  out.pass = all;
}

void cmd_sharpness(const ExperimentConfig& cfg, Report& out) {
  require_grid(cfg, "sharpness");
  const SharpnessReport rep = sharpness_study(cfg.t_grid, cfg.kernel_tol);
  out.columns = {"t", "varentropy", "ratio_envelope", "small_t_ratio",
                 "large_t_gap"};
  for (const SharpnessRow& r : rep.rows) {
    out.rows.push_back({format_double(r.t), format_double(r.varentropy),
                        format_double(r.ratio_envelope),
                        format_double(r.small_t_ratio),
                        format_double(r.large_t_gap)});
  }
  out.summary =
      "min_ratio_envelope = " + format_double(rep.min_ratio_envelope);
  out.pass = rep.min_ratio_envelope > 0.0;
}

void cmd_cutoff_report(const GroupSpec& g, const RateMeasure& mu,
                       const ExperimentConfig& cfg, Report& out) {
  const CutoffDiagnostics d =
      cutoff_report(g, mu, cfg.eps, cfg.kernel_tol);
  out.columns = {"t_mix", "t_rel",         "varent_at_tmix",
                 "ratio", "criterion_rhs", "sqrt_d"};
  out.rows.push_back(
      {format_double(d.t_mix), format_double(d.t_rel),
       format_double(d.varent_at_tmix), format_double(d.ratio),
       format_double(d.criterion_rhs), format_double(d.sqrt_d)});
  // Dimension bound on the varentropy at any fixed time.
  out.pass = d.varent_at_tmix <=
             16.0 * static_cast<double>(mu.generator_count()) + 1e-9;
}

}  // namespace

RunResult run_command(const std::string& command,
                      const ExperimentConfig& cfg) {
  kernels::set_num_threads(cfg.threads);
  const GroupSpec& g = *cfg.group;
  const RateMeasure mu = build_measure(cfg);

  RunResult result;
  result.report.command = command;
  result.report.config_echo = cfg.echo;

  const auto start = std::chrono::steady_clock::now();
  if (command == "validate") {
    cmd_validate(g, mu, result.report);
  } else if (command == "heat") {
    cmd_heat(g, mu, cfg, result.report);
  } else if (command == "stats") {
    cmd_stats(g, mu, cfg, result.report);
  } else if (command == "curvature") {
    cmd_curvature(g, mu, result.report);
  } else if (command == "verify-lemmas") {
    cmd_verify_lemmas(g, mu, cfg, result.report);
  } else if (command == "bound-report") {
    cmd_bound_report(g, mu, cfg, result.report);
  } else if (command == "sharpness") {
    cmd_sharpness(cfg, result.report);
  } else if (command == "cutoff-report") {
    cmd_cutoff_report(g, mu, cfg, result.report);
  } else {
    throw std::invalid_argument("unknown command '" + command + "'");
  }
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  result.exit_code = result.report.pass ? 0 : 1;
  return result;
}

}  // namespace cirw
