#pragma once

#include <span>
#include <vector>

#include "cirw/group.hpp"
#include "cirw/rate_measure.hpp"

namespace cirw {

/// Per-generator varentropy profile: t log^2(1 + 1/sqrt(t)).  Increases
/// from 0 at t = 0 towards 1 at infinity.
double varentropy_envelope(double t);

/// Per-jump gradient profile: 2t E[log_+^2((1 + N)/t)] with N ~ Poisson(t).
/// The Poisson sum is truncated once a certified bound on the remaining
/// contribution drops below tol.
double gradient_envelope(double t, double tol = 1e-12);

struct EnvelopeBoundsReport {
  double max_value = 0.0;          // sup of the gradient profile (claim: <= 8)
  double max_ratio_envelope = 0.0;  // sup U / (21.5 V)          (claim: <= 1)
  double max_ratio_cap = 0.0;       // sup U / (2 + 2/t)          (claim: <= 1)
  double max_ratio_small_t = 0.0;  // sup U / (2t log^2(1 + 1/t)) over t <= 1/e
  bool pass = false;
};

/// Checks the four explicit envelope inequalities on a positive grid.
EnvelopeBoundsReport verify_envelope_bounds(std::span<const double> grid,
                                            double tol = 1e-12,
                                            double slack = 1e-9);

struct BoundRow {
  double t = 0.0;
  double varentropy = 0.0;
  double two_t_gamma_log = 0.0;  // 2t E[Gamma(log f_t)(X_t)]
  double sum_u = 0.0;            // sum over supp(mu) of U(mu(z) t)
  double sum_v = 0.0;            // sum over generator pairs of V(mu_i t)
  double sum_v_support = 0.0;    // sum over supp(mu) of V(mu(z) t)
  double c43_bound = 0.0;        // 43 * sum_v
  double cd_bound = 0.0;         // 16 * generator count
  double prior_factor = 0.0;     // t log^2(1 / mu_min)
  bool prior_valid = false;      // t >= diameter / 4 (finite generating case)
  bool chain_ok = false;
};

/// One row per grid time with the full inequality chain evaluated:
///   varentropy <= 2t E[Gamma log f_t] <= sum_u <= 21.5 sum_v_support
///   varentropy <= c43_bound,  varentropy <= cd_bound
/// chain_ok records whether every link holds within `slack`.
std::vector<BoundRow> theorem_report(const GroupSpec& g, const RateMeasure& mu,
                                     std::span<const double> t_grid,
                                     double kernel_tol = 1e-12,
                                     double slack = 1e-9);

struct SharpnessRow {
  double t = 0.0;
  double varentropy = 0.0;
  double ratio_envelope = 0.0;  // varentropy / V(t)
  double small_t_ratio = 0.0;   // varentropy / (t log^2(1/t)); 0 at t >= 1
  double large_t_gap = 0.0;     // |varentropy - 1/2|
};

struct SharpnessReport {
  std::vector<SharpnessRow> rows;
  double min_ratio_envelope = 0.0;
};

/// Ratio study on the fixed simple walk on the integers, mu(+-1) = 1/2:
/// how tightly the varentropy envelope tracks the true varentropy.
SharpnessReport sharpness_study(std::span<const double> t_grid,
                                double kernel_tol = 1e-12);

}  // namespace cirw
