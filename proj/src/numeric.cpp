#include "cirw/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace cirw {

double compensated_sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

PoissonWeights poisson_weights(double t, double tol) {
  if (!(t >= 0.0)) throw std::domain_error("poisson_weights: t must be >= 0");
  if (!(tol > 0.0 && tol <= 1e-6))
    throw std::domain_error("poisson_weights: tol must be in (0, 1e-6]");

  PoissonWeights out;
  if (t == 0.0) {
    out.weights = {1.0};
    out.deficit = 0.0;
    out.n_max = 0;
    return out;
  }

  // Weights through lgamma so large t does not underflow at n = 0.
  CompensatedSum mass;
  const double log_t = std::log(t);
  for (int n = 0;; ++n) {
    double w = std::exp(-t + n * log_t - std::lgamma(double(n) + 1.0));
    out.weights.push_back(w);
    mass.add(w);
    // Terms decay at ratio r = t/(n+1) once n >= t, so the remaining tail is
    // bounded by w * r / (1 - r).
    if (n >= t) {
      double r = t / (double(n) + 1.0);
      if (w * r / (1.0 - r) < tol) {
        out.n_max = n;
        break;
      }
    }
    if (n > 10'000'000)
      throw std::runtime_error("poisson_weights: truncation did not converge");
  }
  out.deficit = std::max(0.0, 1.0 - mass.value());
  return out;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) {
    throw std::invalid_argument("log_spaced: need 0 < lo <= hi and n >= 1");
  }
  std::vector<double> out(n);
  out[0] = lo;
  if (n == 1) return out;
  const double step = (std::log(hi) - std::log(lo)) / double(n - 1);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = std::exp(std::log(lo) + double(i) * step);
  }
  out[n - 1] = hi;
  return out;
}

}  // namespace cirw
