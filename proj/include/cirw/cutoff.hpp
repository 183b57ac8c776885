#pragma once

#include "cirw/group.hpp"
#include "cirw/rate_measure.hpp"

namespace cirw {

/// Inverse spectral gap of the walk generator on a finite group: 1/lambda_1
/// of the negated generator matrix, symmetric under reversibility.
/// pre: g finite, order <= 4096, support generates g.
/// Throws std::domain_error on a disconnected chain.
double relaxation_time(const GroupSpec& g, const RateMeasure& mu);

/// Smallest t with TV(f_t, uniform) <= eps, by doubling plus bisection to
/// relative precision 1e-6.  TV monotonicity is checked across all probe
/// points rather than assumed.
/// pre: g finite, support generates, eps in (0, 1).
double mixing_time(const GroupSpec& g, const RateMeasure& mu,
                   double eps = 0.25, double kernel_tol = 1e-12);

struct CutoffDiagnostics {
  double t_mix = 0.0;
  double t_rel = 0.0;
  double varent_at_tmix = 0.0;
  double ratio = 0.0;          // t_mix / t_rel
  double criterion_rhs = 0.0;  // 1 + sqrt(varent_at_tmix)
  double sqrt_d = 0.0;         // sqrt(generator count)
};

/// Assembles the mixing diagnostics; the product criterion compares
/// t_mix/t_rel against criterion_rhs (and sqrt_d for the dimension bound)
/// across a family of instances, which is the caller's reading.
CutoffDiagnostics cutoff_report(const GroupSpec& g, const RateMeasure& mu,
                                double eps = 0.25, double kernel_tol = 1e-12);

}  // namespace cirw
