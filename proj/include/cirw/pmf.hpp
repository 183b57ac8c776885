#pragma once

#include <utility>
#include <vector>

#include "cirw/group.hpp"

namespace cirw {

/// Sparse probability mass function over group elements: sorted unique
/// entries with non-negative weights, plus an explicit untracked-mass
/// deficit.  Immutable after construction.
class Pmf {
 public:
  Pmf() = default;

  static Pmf delta(Element x) {
    Pmf p;
    p.entries_.emplace_back(std::move(x), 1.0);
    return p;
  }
  /// Sorts, merges duplicates (summing), drops exact zeros.
  static Pmf from_entries(std::vector<std::pair<Element, double>> entries,
                          double deficit = 0.0);

  const std::vector<std::pair<Element, double>>& entries() const {
    return entries_;
  }
  double deficit() const { return deficit_; }
  std::size_t support_size() const { return entries_.size(); }

  /// Weight at x, 0 if untracked.
  double at(const Element& x) const;

  /// Compensated sum of tracked weights.
  double tracked_mass() const;
  /// |tracked_mass + deficit - 1|.
  double mass_error() const;

 private:
  friend class PmfBuilder;
  std::vector<std::pair<Element, double>> entries_;
  double deficit_ = 0.0;
};

/// Total variation distance between two laws on the same group,
/// (1/2) sum_x |p(x) - q(x)| over the union of supports.
double tv_distance(const Pmf& p, const Pmf& q);

/// TV distance from p to the uniform law on a finite group of the given
/// order; elements outside p's support contribute 1/order each.
double tv_to_uniform(const Pmf& p, std::uint64_t order);

struct InfoStats {
  double entropy = 0.0;     // E[-log f(X)], natural log
  double varentropy = 0.0;  // Var[-log f(X)]
  double deficit = 0.0;     // untracked mass of the input law
  /// (level, value) pairs: smallest v with P[-log f(X) <= v] >= level,
  /// computed on the renormalized tracked law.
  std::vector<std::pair<double, double>> info_quantiles;
};

/// Entropy, varentropy and information-content quantiles of a law.
/// Statistics are computed on the tracked mass renormalized to 1; the
/// deficit is carried through as an error-bar flag.
/// pre: non-empty support, deficit < 1e-8.
InfoStats info_stats(const Pmf& p);

}  // namespace cirw
