#pragma once

#include <stdexcept>
#include <vector>

#include "cirw/group.hpp"
#include "cirw/pmf.hpp"
#include "cirw/rate_measure.hpp"

namespace cirw {

/// Raised when a truncated support is too small for the requested
/// computation (an untracked neighbor was needed).
struct truncation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Law of the rate-1 continuous-time walk at time t, started at the
/// identity: the Poisson(t)-mixture of discrete convolution powers of mu,
/// truncated so the untracked tail mass is below tol (stored as deficit).
///
/// Finite groups run on dense vectors with precomputed product tables;
/// infinite lattices on sparse sorted vectors.  Results are identical to
/// the serial reference bit-for-bit regardless of worker count.
///
/// pre: t >= 0; 0 < tol <= 1e-6; |mu.total_mass() - 1| <= 1e-9.
Pmf heat_kernel(const GroupSpec& g, const RateMeasure& mu, double t,
                double tol = 1e-12);

/// Kernels for several times in one pass over the shared power sequence.
/// Entry i corresponds to ts[i]; each matches heat_kernel(g, mu, ts[i], tol)
/// bit-for-bit.
std::vector<Pmf> heat_kernel_grid(const GroupSpec& g, const RateMeasure& mu,
                                  const std::vector<double>& ts,
                                  double tol = 1e-12);

/// Convolution (p*q)(x) = sum_z p(x z^{-1}) q(z); deficits add.
Pmf convolve(const GroupSpec& g, const Pmf& p, const Pmf& q);

struct GammaLogResult {
  double value = 0.0;          // E[Gamma(log f)(X)] under X ~ p with f = p
  std::size_t dropped = 0;     // entries excluded from the outer sum
  double dropped_mass = 0.0;   // total probability of the excluded entries
};

/// E[Gamma(log f)(X)] = (1/2) sum_{x,z} mu(z) p(x) log^2(p(x)/p(xz)).
///
/// The outer sum excludes entries with p(x) <= weight_floor and entries
/// with an untracked neighbor (the outermost truncation shell, whose mass
/// is on the order of the deficit); both kinds are tallied in dropped /
/// dropped_mass.  Throws truncation_error when the excluded mass exceeds
/// 1e-6, which indicates a kernel truncated far too aggressively for this
/// expectation to mean anything.
GammaLogResult expected_gamma_log(const GroupSpec& g, const RateMeasure& mu,
                                  const Pmf& p, double weight_floor = 1e-14);

}  // namespace cirw
