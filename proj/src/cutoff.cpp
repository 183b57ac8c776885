#include "cirw/cutoff.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cirw/heat_kernel.hpp"
#include "cirw/pmf.hpp"

namespace cirw {

namespace {

void require_connected(const GroupSpec& g, const RateMeasure& mu,
                       const char* who) {
  if (!g.is_finite()) {
    throw std::domain_error(std::string(who) + ": finite groups only");
  }
  if (!cayley_diameter(g, mu.support()).generates) {
    throw std::domain_error(std::string(who) +
                            ": support does not generate, chain disconnected");
  }
}

}  // namespace

double relaxation_time(const GroupSpec& g, const RateMeasure& mu) {
  require_connected(g, mu, "relaxation_time");
  const GroupIndex idx = enumerate_group(g);
  const std::size_t n = idx.size();
  if (n > 4096) {
    throw std::domain_error("relaxation_time: group order above 4096");
  }

  // Negated generator: m(x,x) = total rate, m(x, xz) = -mu(z); symmetric
  // because mu(z) = mu(z^{-1}).
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  const double total = mu.total_mass();
  for (std::size_t x = 0; x < n; ++x) {
    m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = total;
    for (const auto& [z, r] : mu.entries()) {
      const std::uint32_t y = idx.at(g.multiply(idx.elements[x], z));
      m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) -= r;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("relaxation_time: eigensolver failed");
  }
  const double gap = solver.eigenvalues()(1);
  if (!(gap > 0.0)) {
    throw std::runtime_error("relaxation_time: vanishing spectral gap");
  }
  return 1.0 / gap;
}

double mixing_time(const GroupSpec& g, const RateMeasure& mu, double eps,
                   double kernel_tol) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("mixing_time: eps must be in (0, 1)");
  }
  require_connected(g, mu, "mixing_time");
  const std::uint64_t order = g.order();

  std::vector<std::pair<double, double>> probes;
  const auto tv_at = [&](double t) {
    const double tv = tv_to_uniform(heat_kernel(g, mu, t, kernel_tol), order);
    probes.emplace_back(t, tv);
    return tv;
  };
  const auto check_monotone = [&]() {
    std::sort(probes.begin(), probes.end());
    for (std::size_t i = 1; i < probes.size(); ++i) {
      if (probes[i].second > probes[i - 1].second + 1e-12) {
        throw std::runtime_error(
            "mixing_time: TV distance not monotone across probes");
      }
    }
  };

  if (tv_at(0.0) <= eps) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (tv_at(hi) > eps) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18) {
      throw std::runtime_error("mixing_time: threshold never reached");
    }
  }

  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (tv_at(mid) > eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  check_monotone();
  return hi;
}

CutoffDiagnostics cutoff_report(const GroupSpec& g, const RateMeasure& mu,
                                double eps, double kernel_tol) {
  CutoffDiagnostics diag;
  diag.t_rel = relaxation_time(g, mu);
  diag.t_mix = mixing_time(g, mu, eps, kernel_tol);
  diag.varent_at_tmix =
      info_stats(heat_kernel(g, mu, diag.t_mix, kernel_tol)).varentropy;
  diag.ratio = diag.t_mix / diag.t_rel;
  diag.criterion_rhs = 1.0 + std::sqrt(diag.varent_at_tmix);
  diag.sqrt_d = std::sqrt(static_cast<double>(mu.generator_count()));
  return diag;
}

}  // namespace cirw
