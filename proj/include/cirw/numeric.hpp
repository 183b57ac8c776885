#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace cirw {

/// Compensated (Neumaier) accumulator for long sums of doubles.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Sum a span in index order with compensation.
double compensated_sum(std::span<const double> xs);

/// Truncated Poisson(t) weight sequence.
///
/// weights[n] = e^{-t} t^n / n! for n = 0..n_max, where n_max is the smallest
/// index at which a geometric ratio bound certifies the remaining tail mass
/// is below `tol`.  `deficit` is the clamped complement 1 - sum(weights).
struct PoissonWeights {
  std::vector<double> weights;
  double deficit = 0.0;
  int n_max = 0;
};

/// pre: t >= 0, 0 < tol <= 1e-6.
PoissonWeights poisson_weights(double t, double tol);

/// n points, log-uniform on [lo, hi], endpoints included (n = 1 -> {lo}).
/// pre: 0 < lo <= hi, n >= 1.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

/// log_+(x)^2 = (max(log x, 0))^2.
inline double log_plus_sq(double x) {
  double l = std::log(x);
  return l > 0.0 ? l * l : 0.0;
}

}  // namespace cirw
