#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cirw/group.hpp"

namespace cirw {

/// A symmetric jump-rate measure on a group: finitely many positive rates on
/// non-identity elements with mu(z) = mu(z^{-1}) exactly (reversibility).
/// Conjugacy invariance is checked separately by validate_rate_measure.
///
/// Immutable after construction.  Entries and generators are sorted by
/// element, so iteration order is deterministic.
class RateMeasure {
 public:
  /// pre: entries non-empty, elements canonical/non-identity/distinct,
  /// rates > 0, and mu(z) == mu(z^{-1}) bit-exactly.
  /// Throws std::invalid_argument on any violation.
  RateMeasure(const GroupSpec& g,
              std::vector<std::pair<Element, double>> entries);

  /// Build from one entry per generator pair: rate r on e and on e^{-1}
  /// (a single entry when e is an involution).
  static RateMeasure from_generators(
      const GroupSpec& g, const std::vector<std::pair<Element, double>>& gens);

  const std::vector<std::pair<Element, double>>& entries() const {
    return entries_;
  }
  /// One representative per {e, e^{-1}} pair (the lexicographically smaller
  /// element), with its rate.
  const std::vector<std::pair<Element, double>>& generators() const {
    return generators_;
  }
  /// True at position i iff generators()[i].first is an involution.
  const std::vector<bool>& generator_is_involution() const {
    return involution_;
  }

  std::size_t support_size() const { return entries_.size(); }
  std::size_t generator_count() const { return generators_.size(); }
  double total_mass() const { return total_mass_; }
  double min_rate() const { return min_rate_; }

  /// Rate at z, 0 if z is outside the support.
  double at(const Element& z) const;
  std::vector<Element> support() const;

 private:
  std::vector<std::pair<Element, double>> entries_;     // sorted by element
  std::vector<std::pair<Element, double>> generators_;  // sorted by element
  std::vector<bool> involution_;
  double total_mass_ = 0.0;
  double min_rate_ = 0.0;
};

enum class ConjugacyStatus {
  satisfied_trivially,  // abelian group
  satisfied,            // checked by enumeration
  violated,
  unsupported,  // infinite non-abelian: not checkable here
};

struct ValidationReport {
  bool reversible = true;  // A2; always true for a constructed RateMeasure
  ConjugacyStatus conjugacy = ConjugacyStatus::satisfied_trivially;
  /// Witnesses (x, z) with mu(x z x^{-1}) != mu(z).
  std::vector<std::pair<Element, Element>> violations;
  double total_mass = 0.0;
  double min_rate = 0.0;
  std::size_t generator_count = 0;

  bool ok() const {
    return reversible && (conjugacy == ConjugacyStatus::satisfied ||
                          conjugacy == ConjugacyStatus::satisfied_trivially);
  }
};

/// Checks conjugacy invariance: on abelian groups trivially satisfied; on
/// finite groups by enumerating every (x, z) pair with bit-exact comparison;
/// infinite non-abelian groups are reported unsupported.
ValidationReport validate_rate_measure(const GroupSpec& g,
                                       const RateMeasure& mu);

}  // namespace cirw
