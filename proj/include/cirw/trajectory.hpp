#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cirw/group.hpp"
#include "cirw/pmf.hpp"
#include "cirw/rate_measure.hpp"

namespace cirw {

/// A finite word of jump increments; the walk visits the left-to-right
/// partial products.
struct Word {
  std::vector<Element> letters;

  std::size_t size() const { return letters.size(); }
};

/// Ordered product of the letters (empty word -> identity).
Element word_value(const GroupSpec& g, const Word& w);

/// n i.i.d. letters drawn from mu normalized to a probability.
/// Deterministic for a fixed seed (std::mt19937_64, inversion sampling).
Word sample_word(const GroupSpec& g, const RateMeasure& mu, std::size_t n,
                 std::uint64_t seed);

/// Word of Poisson(t) length with i.i.d. mu letters: the jump sequence of
/// the unit-total-rate walk up to time t.  pre: |total_mass - 1| <= 1e-9.
Word sample_path(const GroupSpec& g, const RateMeasure& mu, double t,
                 std::uint64_t seed);

/// Number of positions j whose letter equals z conjugated by the suffix
/// product w_{j+1} ... w_n.  Right-to-left pass, O(n) group operations.
/// On abelian groups this is simply #{j : w_j = z}.
std::uint64_t suffix_match_count(const GroupSpec& g, const Word& w,
                                 const Element& z);

/// Insert the suffix-conjugate of z at position i (1-based, 1 <= i <= n+1):
/// the new letter is (w_i...w_n) z (w_i...w_n)^{-1}, so the value of the
/// word becomes val(w) * z.  Throws std::out_of_range on bad i.
Word insert_conjugated(const GroupSpec& g, const Word& w, std::size_t i,
                       const Element& z);

struct InsertionReport {
  std::uint64_t words_checked = 0;
  std::uint64_t insertions_checked = 0;
  bool value_shift = false;        // val(insert(w,i)) = val(w) z always
  bool weight_product = false;     // weight(insert(w,i)) = weight(w) mu(z)
  bool preimage_counts = false;    // |preimage| = 1 + match count of w
  bool image_characterized = false;  // image = {eta : match count != 0}
  std::string first_counterexample;  // empty when everything passes

  bool ok() const {
    return value_shift && weight_product && preimage_counts &&
           image_characterized;
  }
};

/// Exhaustively checks the four properties of the insertion map over all
/// words in supp(mu)^n and all positions, for one fixed z.  Word weights
/// are products of letter rates evaluated in sorted order, so the weight
/// identity is checked bit-exactly.
/// pre: |supp mu|^{n+1} (n+1) <= 1e7; throws std::domain_error with the
/// size estimate otherwise.
InsertionReport verify_insertion(const GroupSpec& g, const RateMeasure& mu,
                                 std::size_t n, const Element& z);

/// Joint law of (word value, suffix match count) for n i.i.d. mu letters.
/// Rows are sorted by element; row(x)[k] = P(value = x, count = k).
struct JointLaw {
  std::size_t n = 0;
  Element z;
  std::vector<std::pair<Element, std::vector<double>>> rows;

  /// P(value = x, count = k); 0 when untracked.
  double at(const Element& x, std::size_t k) const;
  Pmf value_marginal() const;
  std::vector<double> count_marginal() const;  // length n+1
  double total_mass() const;
};

/// Dynamic program over (suffix product, count) states: prepending letter u
/// to suffix state s increments the count iff u = s z s^{-1} and moves the
/// state to u s.  Polynomial in |reachable states| * n instead of the
/// |supp mu|^n word enumeration.
/// pre: |total_mass - 1| <= 1e-9; n <= 200; finite group or lattice.
JointLaw joint_endpoint_count_law(const GroupSpec& g, const RateMeasure& mu,
                                  std::size_t n, const Element& z);

struct CountLawReport {
  double mean = 0.0;           // t mu(z), rates normalized
  double max_deviation = 0.0;  // entrywise vs Poisson(mean)
  bool pass = false;
};

/// Law of the match count of a Poisson(t)-length word, compared entrywise
/// with Poisson(t mu(z)).
CountLawReport verify_poisson_count_law(const GroupSpec& g,
                                        const RateMeasure& mu, double t,
                                        const Element& z, double tol = 1e-10);

struct ChangeOfMeasureReport {
  double lhs = 0.0;  // P(X_t = x z, count != 0)
  double rhs = 0.0;  // t mu(z) E[1/(1 + count); X_t = x]
  double gap = 0.0;
  bool pass = false;
};

/// Both sides of the size-bias identity relating the walk at x z with a
/// nonzero match count to the reweighted walk at x.
ChangeOfMeasureReport verify_change_of_measure(const GroupSpec& g,
                                               const RateMeasure& mu, double t,
                                               const Element& x,
                                               const Element& z,
                                               double tol = 1e-10);

}  // namespace cirw
