#include "cirw/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cirw/heat_kernel.hpp"
#include "cirw/numeric.hpp"
#include "cirw/pmf.hpp"

namespace cirw {

double varentropy_envelope(double t) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("varentropy_envelope: t must be >= 0");
  }
  if (t == 0.0) return 0.0;
  const double l = std::log1p(1.0 / std::sqrt(t));
  return t * l * l;
}

double gradient_envelope(double t, double tol) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("gradient_envelope: t must be >= 0");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("gradient_envelope: tol must be > 0");
  }
  if (t == 0.0) return 0.0;

  // 2t sum_m p_m log_+^2((1+m)/t), p_m = Poisson(t).  Since
  // log_+^2(x) <= x, the tail past m is at most
  // 2 sum_{j>m} p_j (1+j) = 2(1+t) T(m) + 2t p_m with T(m) the tail mass,
  // and T(m) <= p_m r / (1-r) for r = t/(m+1) < 1.
  const double log_t = std::log(t);
  CompensatedSum acc;
  for (long m = 0;; ++m) {
    const double p =
        std::exp(-t + double(m) * log_t - std::lgamma(double(m) + 1.0));
    acc.add(p * log_plus_sq((double(m) + 1.0) / t));
    if (double(m) >= t) {
      const double r = t / (double(m) + 1.0);
      const double tail_mass = p * r / (1.0 - r);
      if (2.0 * (1.0 + t) * tail_mass + 2.0 * t * p < tol) break;
    }
    if (m > 20'000'000) {
      throw std::runtime_error("gradient_envelope: sum did not converge");
    }
  }
  return 2.0 * t * acc.value();
}

EnvelopeBoundsReport verify_envelope_bounds(std::span<const double> grid,
                                            double tol, double slack) {
  EnvelopeBoundsReport report;
  for (double t : grid) {
    if (!(t > 0.0)) {
      throw std::invalid_argument("verify_envelope_bounds: grid must be > 0");
    }
    const double u = gradient_envelope(t, tol);
    report.max_value = std::max(report.max_value, u);
    report.max_ratio_envelope = std::max(
        report.max_ratio_envelope, u / (21.5 * varentropy_envelope(t)));
    report.max_ratio_cap =
        std::max(report.max_ratio_cap, u / (2.0 + 2.0 / t));
    if (t <= std::exp(-1.0)) {
      const double l = std::log1p(1.0 / t);
      report.max_ratio_small_t =
          std::max(report.max_ratio_small_t, u / (2.0 * t * l * l));
    }
  }
  report.pass = report.max_value <= 8.0 + slack &&
                report.max_ratio_envelope <= 1.0 + slack &&
                report.max_ratio_cap <= 1.0 + slack &&
                report.max_ratio_small_t <= 1.0 + slack;
  return report;
}

std::vector<BoundRow> theorem_report(const GroupSpec& g, const RateMeasure& mu,
                                     std::span<const double> t_grid,
                                     double kernel_tol, double slack) {
  const std::vector<double> ts(t_grid.begin(), t_grid.end());
  const std::vector<Pmf> kernels = heat_kernel_grid(g, mu, ts, kernel_tol);

  bool have_diameter = false;
  double diameter = 0.0;
  if (g.is_finite()) {
    const DiameterResult d = cayley_diameter(g, mu.support());
    if (d.generates) {
      have_diameter = true;
      diameter = static_cast<double>(d.diameter);
    }
  }

  const double log_inv_min = std::log(1.0 / mu.min_rate());
  const double cd = 16.0 * static_cast<double>(mu.generator_count());

  std::vector<BoundRow> rows;
  rows.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    BoundRow row;
    row.t = t;
    row.varentropy = info_stats(kernels[i]).varentropy;
    row.two_t_gamma_log =
        2.0 * t * expected_gamma_log(g, mu, kernels[i]).value;

    CompensatedSum su, sv_supp;
    for (const auto& entry : mu.entries()) {
      su.add(gradient_envelope(entry.second * t, kernel_tol));
      sv_supp.add(varentropy_envelope(entry.second * t));
    }
    CompensatedSum sv;
    for (const auto& entry : mu.generators()) {
      sv.add(varentropy_envelope(entry.second * t));
    }
    row.sum_u = su.value();
    row.sum_v_support = sv_supp.value();
    row.sum_v = sv.value();
    row.c43_bound = 43.0 * row.sum_v;
    row.cd_bound = cd;
    row.prior_factor = t * log_inv_min * log_inv_min;
    row.prior_valid = have_diameter && t >= diameter / 4.0;
    row.chain_ok = row.varentropy <= row.two_t_gamma_log + slack &&
                   row.two_t_gamma_log <= row.sum_u + slack &&
                   row.sum_u <= 21.5 * row.sum_v_support + slack &&
                   row.varentropy <= row.c43_bound + slack &&
                   row.varentropy <= row.cd_bound + slack;
    rows.push_back(row);
  }
  return rows;
}

SharpnessReport sharpness_study(std::span<const double> t_grid,
                                double kernel_tol) {
  const GroupSpec g = GroupSpec::lattice({0});
  const RateMeasure mu = RateMeasure::from_generators(g, {{{1}, 0.5}});

  const std::vector<double> ts(t_grid.begin(), t_grid.end());
  const std::vector<Pmf> kernels = heat_kernel_grid(g, mu, ts, kernel_tol);

  SharpnessReport report;
  report.rows.reserve(ts.size());
  report.min_ratio_envelope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    SharpnessRow row;
    row.t = ts[i];
    row.varentropy = info_stats(kernels[i]).varentropy;
    row.ratio_envelope = row.varentropy / varentropy_envelope(row.t);
    if (row.t < 1.0) {
      const double l = std::log(1.0 / row.t);
      row.small_t_ratio = row.varentropy / (row.t * l * l);
    }
    row.large_t_gap = std::abs(row.varentropy - 0.5);
    report.min_ratio_envelope =
        std::min(report.min_ratio_envelope, row.ratio_envelope);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace cirw
