#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cirw/group.hpp"
#include "cirw/pmf.hpp"
#include "cirw/rate_measure.hpp"

namespace cirw {

/// Real-valued test function on a group: finitely many explicit values over
/// a constant background (so adding a constant works on infinite groups
/// too).  Immutable after construction.
class TestFunction {
 public:
  TestFunction() = default;
  /// Throws std::invalid_argument on duplicate elements.
  static TestFunction from_values(
      std::vector<std::pair<Element, double>> values, double background = 0.0);

  double at(const Element& x) const;
  double background() const { return background_; }
  const std::vector<std::pair<Element, double>>& values() const {
    return values_;
  }

  TestFunction plus_constant(double c) const;
  TestFunction scaled(double a) const;
  /// (T_a f)(x) = f(a x).
  TestFunction left_translated(const GroupSpec& g, const Element& a) const;

 private:
  std::vector<std::pair<Element, double>> values_;  // sorted by element
  double background_ = 0.0;
};

/// (Lf)(x) = sum_z mu(z) (f(xz) - f(x)), rates as given (unnormalized ok).
double generator_apply(const GroupSpec& g, const RateMeasure& mu,
                       const TestFunction& f, const Element& x);

/// Carre du champ Gamma(f,h)(x) = (1/2) sum_z mu(z)
///   (f(xz) - f(x)) (h(xz) - h(x)).
double gamma(const GroupSpec& g, const RateMeasure& mu, const TestFunction& f,
             const TestFunction& h, const Element& x);
double gamma(const GroupSpec& g, const RateMeasure& mu, const TestFunction& f,
             const Element& x);

/// Iterated form by definition: (1/2)[L Gamma(f) - 2 Gamma(f, Lf)](x).
double gamma2_definitional(const GroupSpec& g, const RateMeasure& mu,
                           const TestFunction& f, const Element& x);

/// Closed form at the identity for conjugacy-invariant mu:
///   Gamma_2(f)(id) = (1/4) sum_{z,w} mu(z) mu(w)
///     (f0(zw) - f0(z) - f0(w))^2,   f0 = f - f(id).
double gamma2_closed_form(const GroupSpec& g, const RateMeasure& mu,
                          const TestFunction& f);

struct CurvatureReport {
  double kappa_best = 0.0;  // largest kappa with Gamma_2 >= kappa * Gamma
  double mu_min = 0.0;
  bool order2_support = false;  // every generator an involution
  bool nonnegative = false;     // kappa_best >= -1e-10
  std::size_t ball1_size = 0;   // |supp mu|
  std::size_t ball2_size = 0;   // coordinates entering the Gamma_2 form
};

/// Best Bakry-Emery curvature constant.  Both forms at the identity depend
/// on f only through its values on supp(mu) and pairwise products; the
/// coordinates invisible to Gamma are eliminated in closed form (Schur
/// complement over the diagonal product-only block), leaving a symmetric
/// eigenproblem weighted by the diagonal Gamma form.
CurvatureReport bakry_emery_curvature(const GroupSpec& g,
                                      const RateMeasure& mu);

struct PoincareCheck {
  double lhs = 0.0;  // Var[f(X_t)]
  double rhs = 0.0;
  bool holds = false;
};

/// Var[f(X_t)] <= 2t E[Gamma f(X_t)].
PoincareCheck check_local_poincare(const GroupSpec& g, const RateMeasure& mu,
                                   const TestFunction& f, double t,
                                   double kernel_tol = 1e-12,
                                   double slack = 1e-9);

/// Uniform-in-time version under positive curvature:
/// Var[f(X_t)] <= (1/kappa) E[Gamma f(X_t)].
PoincareCheck check_poincare_uniform(const GroupSpec& g, const RateMeasure& mu,
                                     const TestFunction& f, double t,
                                     double kappa, double kernel_tol = 1e-12,
                                     double slack = 1e-9);

/// sup_{x, z in supp mu} |f(xz) - f(x)|.
double lipschitz_constant(const GroupSpec& g, const RateMeasure& mu,
                          const TestFunction& f);

/// Wasserstein-flavored comparison bound: Var[f(X_t)] <= t Lip(f)^2.
PoincareCheck check_poincare_lipschitz(const GroupSpec& g,
                                       const RateMeasure& mu,
                                       const TestFunction& f, double t,
                                       double kernel_tol = 1e-12,
                                       double slack = 1e-9);

struct SubcommutationCheck {
  double max_gap = 0.0;  // max_x [Gamma(P_s f)(x) - e^{-2 kappa s} P_s(Gamma f)(x)]
  bool holds = false;
};

/// Gradient sub-commutation equivalent to the curvature condition:
///   Gamma(P_s f) <= e^{-2 kappa s} P_s(Gamma f)   pointwise.
/// pre: g finite.
SubcommutationCheck check_subcommutation(const GroupSpec& g,
                                         const RateMeasure& mu,
                                         const TestFunction& f, double s,
                                         double kappa,
                                         double kernel_tol = 1e-12,
                                         double slack = 1e-9);

}  // namespace cirw
