#include "cirw/curvature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cirw/heat_kernel.hpp"
#include "cirw/numeric.hpp"

namespace cirw {

TestFunction TestFunction::from_values(
    std::vector<std::pair<Element, double>> values, double background) {
  std::sort(values.begin(), values.end());
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i].first == values[i - 1].first) {
      throw std::invalid_argument("TestFunction: duplicate element");
    }
  }
  TestFunction f;
  f.values_ = std::move(values);
  f.background_ = background;
  return f;
}

double TestFunction::at(const Element& x) const {
  auto it = std::lower_bound(
      values_.begin(), values_.end(), x,
      [](const std::pair<Element, double>& e, const Element& k) {
        return e.first < k;
      });
  if (it != values_.end() && it->first == x) return it->second;
  return background_;
}

TestFunction TestFunction::plus_constant(double c) const {
  TestFunction f = *this;
  for (auto& [x, v] : f.values_) v += c;
  f.background_ += c;
  return f;
}

TestFunction TestFunction::scaled(double a) const {
  TestFunction f = *this;
  for (auto& [x, v] : f.values_) v *= a;
  f.background_ *= a;
  return f;
}

TestFunction TestFunction::left_translated(const GroupSpec& g,
                                           const Element& a) const {
  const Element ainv = g.inverse(a);
  std::vector<std::pair<Element, double>> moved;
  moved.reserve(values_.size());
  for (const auto& [x, v] : values_) {
    moved.emplace_back(g.multiply(ainv, x), v);
  }
  return from_values(std::move(moved), background_);
}

double generator_apply(const GroupSpec& g, const RateMeasure& mu,
                       const TestFunction& f, const Element& x) {
  const double fx = f.at(x);
  CompensatedSum acc;
  for (const auto& [z, r] : mu.entries()) {
    acc.add(r * (f.at(g.multiply(x, z)) - fx));
  }
  return acc.value();
}

double gamma(const GroupSpec& g, const RateMeasure& mu, const TestFunction& f,
             const TestFunction& h, const Element& x) {
  const double fx = f.at(x);
  const double hx = h.at(x);
  CompensatedSum acc;
  for (const auto& [z, r] : mu.entries()) {
    const Element xz = g.multiply(x, z);
    acc.add(r * (f.at(xz) - fx) * (h.at(xz) - hx));
  }
  return 0.5 * acc.value();
}

double gamma(const GroupSpec& g, const RateMeasure& mu, const TestFunction& f,
             const Element& x) {
  const double fx = f.at(x);
  CompensatedSum acc;
  for (const auto& [z, r] : mu.entries()) {
    const double d = f.at(g.multiply(x, z)) - fx;
    acc.add(r * d * d);
  }
  return 0.5 * acc.value();
}

double gamma2_definitional(const GroupSpec& g, const RateMeasure& mu,
                           const TestFunction& f, const Element& x) {
  const auto gamma_at = [&](const Element& y) { return gamma(g, mu, f, y); };
  const auto lf_at = [&](const Element& y) {
    return generator_apply(g, mu, f, y);
  };

  const double gx = gamma_at(x);
  const double lfx = lf_at(x);
  const double fx = f.at(x);
  CompensatedSum l_gamma;
  CompensatedSum gamma_f_lf;
  for (const auto& [z, r] : mu.entries()) {
    const Element xz = g.multiply(x, z);
    l_gamma.add(r * (gamma_at(xz) - gx));
    gamma_f_lf.add(r * (f.at(xz) - fx) * (lf_at(xz) - lfx));
  }
  return 0.5 * l_gamma.value() - 0.5 * gamma_f_lf.value();
}

double gamma2_closed_form(const GroupSpec& g, const RateMeasure& mu,
                          const TestFunction& f) {
  const double f_id = f.at(g.identity());
  const auto f0 = [&](const Element& y) { return f.at(y) - f_id; };
  CompensatedSum acc;
  for (const auto& [z, rz] : mu.entries()) {
    const double fz = f0(z);
    for (const auto& [w, rw] : mu.entries()) {
      const double d = f0(g.multiply(z, w)) - fz - f0(w);
      acc.add(rz * rw * d * d);
    }
  }
  return 0.25 * acc.value();
}

CurvatureReport bakry_emery_curvature(const GroupSpec& g,
                                      const RateMeasure& mu) {
  const Element id = g.identity();
  const auto& entries = mu.entries();
  const std::size_t m = entries.size();

  // Coordinates of the quadratic form: the support elements first, then the
  // pairwise products that fall outside support u {id}.  Values of f at
  // distinct non-identity elements are free, so minimizing over the
  // product-only block is exact.
  std::unordered_map<Element, std::size_t, ElementHash> coord;
  for (std::size_t i = 0; i < m; ++i) coord.emplace(entries[i].first, i);

  std::vector<Element> extra;
  for (const auto& ez : entries) {
    for (const auto& ew : entries) {
      Element y = g.multiply(ez.first, ew.first);
      if (y == id || coord.count(y)) continue;
      extra.push_back(std::move(y));
    }
  }
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  for (std::size_t i = 0; i < extra.size(); ++i) coord.emplace(extra[i], m + i);
  const std::size_t q = extra.size();
  const std::size_t dim = m + q;

  // Gamma_2(f)(id) = sum over ordered pairs of (1/4) mu(z) mu(w) times
  // (f0(zw) - f0(z) - f0(w))^2 with f0(id) = 0; each term is a rank-one
  // update on at most three coordinates.  Every product coordinate appears
  // in exactly one term position, so the product-only diagonal block stays
  // diagonal and positive.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& [z, rz] = entries[i];
      const auto& [w, rw] = entries[j];
      const double c = 0.25 * rz * rw;
      const Element y = g.multiply(z, w);

      Eigen::Index support[3];
      double sign[3];
      int k = 0;
      if (y != id) {
        support[k] = static_cast<Eigen::Index>(coord.at(y));
        sign[k++] = 1.0;
      }
      support[k] = static_cast<Eigen::Index>(i);
      sign[k++] = -1.0;
      support[k] = static_cast<Eigen::Index>(j);
      sign[k++] = -1.0;

      for (int p = 0; p < k; ++p) {
        for (int r = 0; r < k; ++r) {
          a(support[p], support[r]) += c * sign[p] * sign[r];
        }
      }
    }
  }

  Eigen::MatrixXd a11 = a.topLeftCorner(m, m);
  if (q > 0) {
    const Eigen::MatrixXd a12 = a.topRightCorner(m, q);
    const Eigen::VectorXd d22 = a.bottomRightCorner(q, q).diagonal();
    a11 -= a12 * d22.cwiseInverse().asDiagonal() * a12.transpose();
  }

  // Gamma(f)(id) = sum_z (1/2) mu(z) f0(z)^2: a positive diagonal form on
  // the support coordinates.  kappa_best is the smallest eigenvalue of the
  // symmetrically rescaled Schur complement.
  Eigen::VectorXd dinv_sqrt(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    dinv_sqrt(static_cast<Eigen::Index>(i)) =
        1.0 / std::sqrt(0.5 * entries[i].second);
  }
  Eigen::MatrixXd scaled =
      dinv_sqrt.asDiagonal() * a11 * dinv_sqrt.asDiagonal();
  scaled = 0.5 * (scaled + scaled.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      scaled, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("bakry_emery_curvature: eigensolver failed");
  }

  CurvatureReport report;
  report.kappa_best = solver.eigenvalues()(0);
  report.mu_min = mu.min_rate();
  report.order2_support = true;
  for (const auto& entry : entries) {
    if (g.multiply(entry.first, entry.first) != id) {
      report.order2_support = false;
      break;
    }
  }
  report.nonnegative = report.kappa_best >= -1e-10;
  report.ball1_size = m;
  report.ball2_size = dim;
  return report;
}

namespace {

struct LawMoments {
  double variance = 0.0;
  double mean_gamma = 0.0;
};

LawMoments law_moments(const GroupSpec& g, const RateMeasure& mu,
                       const TestFunction& f, const Pmf& law) {
  // Center at the background value; the untracked deficit then contributes
  // nothing to either moment.
  const double b = f.background();
  CompensatedSum m1, m2, mg;
  for (const auto& [x, p] : law.entries()) {
    const double v = f.at(x) - b;
    m1.add(p * v);
    m2.add(p * v * v);
    mg.add(p * gamma(g, mu, f, x));
  }
  LawMoments out;
  const double mean = m1.value();
  out.variance = std::max(0.0, m2.value() - mean * mean);
  out.mean_gamma = mg.value();
  return out;
}

}  // namespace

PoincareCheck check_local_poincare(const GroupSpec& g, const RateMeasure& mu,
                                   const TestFunction& f, double t,
                                   double kernel_tol, double slack) {
  const Pmf law = heat_kernel(g, mu, t, kernel_tol);
  const LawMoments mom = law_moments(g, mu, f, law);
  PoincareCheck out;
  out.lhs = mom.variance;
  out.rhs = 2.0 * t * mom.mean_gamma;
  out.holds = out.lhs <= out.rhs + slack;
  return out;
}

PoincareCheck check_poincare_uniform(const GroupSpec& g, const RateMeasure& mu,
                                     const TestFunction& f, double t,
                                     double kappa, double kernel_tol,
                                     double slack) {
  if (!(kappa > 0.0)) {
    throw std::invalid_argument(
        "check_poincare_uniform: requires kappa > 0");
  }
  const Pmf law = heat_kernel(g, mu, t, kernel_tol);
  const LawMoments mom = law_moments(g, mu, f, law);
  PoincareCheck out;
  out.lhs = mom.variance;
  out.rhs = mom.mean_gamma / kappa;
  out.holds = out.lhs <= out.rhs + slack;
  return out;
}

double lipschitz_constant(const GroupSpec& g, const RateMeasure& mu,
                          const TestFunction& f) {
  std::vector<Element> points;
  if (g.is_finite()) {
    points = enumerate_group(g).elements;
  } else {
    // Off supp(f) and its generator shifts, every increment is 0.
    for (const auto& entry : f.values()) {
      points.push_back(entry.first);
      for (const auto& step : mu.entries()) {
        points.push_back(g.multiply(entry.first, g.inverse(step.first)));
      }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
  }

  double lip = 0.0;
  for (const Element& x : points) {
    const double fx = f.at(x);
    for (const auto& step : mu.entries()) {
      lip = std::max(lip, std::abs(f.at(g.multiply(x, step.first)) - fx));
    }
  }
  return lip;
}

PoincareCheck check_poincare_lipschitz(const GroupSpec& g,
                                       const RateMeasure& mu,
                                       const TestFunction& f, double t,
                                       double kernel_tol, double slack) {
  const Pmf law = heat_kernel(g, mu, t, kernel_tol);
  const LawMoments mom = law_moments(g, mu, f, law);
  const double lip = lipschitz_constant(g, mu, f);
  PoincareCheck out;
  out.lhs = mom.variance;
  out.rhs = t * lip * lip;
  out.holds = out.lhs <= out.rhs + slack;
  return out;
}

SubcommutationCheck check_subcommutation(const GroupSpec& g,
                                         const RateMeasure& mu,
                                         const TestFunction& f, double s,
                                         double kappa, double kernel_tol,
                                         double slack) {
  if (!g.is_finite()) {
    throw std::domain_error("check_subcommutation: finite groups only");
  }
  const GroupIndex idx = enumerate_group(g);
  const std::size_t n = idx.size();
  const auto& entries = mu.entries();
  const std::size_t m = entries.size();

  std::vector<double> fd(n);
  for (std::size_t i = 0; i < n; ++i) fd[i] = f.at(idx.elements[i]);

  std::vector<std::uint32_t> nbr(m * n);
  std::vector<double> rate(m);
  for (std::size_t k = 0; k < m; ++k) {
    rate[k] = entries[k].second;
    for (std::size_t i = 0; i < n; ++i) {
      nbr[k * n + i] = idx.at(g.multiply(idx.elements[i], entries[k].first));
    }
  }

  const auto dense_gamma = [&](const std::vector<double>& v) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      CompensatedSum acc;
      for (std::size_t k = 0; k < m; ++k) {
        const double d = v[nbr[k * n + i]] - v[i];
        acc.add(rate[k] * d * d);
      }
      out[i] = 0.5 * acc.value();
    }
    return out;
  };

  const std::vector<double> gamma_f = dense_gamma(fd);

  const Pmf ker = heat_kernel(g, mu, s, kernel_tol);
  std::vector<double> psf(n), ps_gamma_f(n);
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum accf, accg;
    for (const auto& [y, w] : ker.entries()) {
      const std::uint32_t j = idx.at(g.multiply(idx.elements[i], y));
      accf.add(w * fd[j]);
      accg.add(w * gamma_f[j]);
    }
    psf[i] = accf.value();
    ps_gamma_f[i] = accg.value();
  }

  const std::vector<double> gamma_psf = dense_gamma(psf);
  const double damp = std::exp(-2.0 * kappa * s);

  SubcommutationCheck out;
  out.max_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    out.max_gap = std::max(out.max_gap, gamma_psf[i] - damp * ps_gamma_f[i]);
  }
  out.holds = out.max_gap <= slack;
  return out;
}

}  // namespace cirw
