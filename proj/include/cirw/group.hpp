#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cirw {

/// A group element in the family-specific canonical encoding:
///  - lattice:   one signed coordinate per factor, reduced into [0, m_j)
///               for finite factors (m_j = 0 marks a copy of the integers);
///  - symmetric: one-line permutation of {0..n-1};
///  - dihedral:  {rotation exponent in [0, n), reflection bit in {0, 1}}.
/// Equal elements always have identical encodings.
using Element = std::vector<std::int64_t>;

struct ElementHash {
  std::size_t operator()(const Element& e) const {
    // FNV-1a over the coordinate bytes.
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t v : e) {
      auto u = static_cast<std::uint64_t>(v);
      for (int i = 0; i < 8; ++i) {
        h ^= (u >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

enum class GroupFamily { lattice, symmetric, dihedral };

/// Immutable description of one supported group.  All operations are pure;
/// instances can be shared freely across threads.
class GroupSpec {
 public:
  /// Product of cyclic/integer factors; modulus 0 means an infinite factor.
  static GroupSpec lattice(std::vector<std::int64_t> moduli);
  /// Boolean cube {0,1}^d, i.e. lattice with every modulus 2.
  static GroupSpec hypercube(int d);
  /// Permutations of n symbols, 2 <= n <= 9, acting by (a*b)(i) = a(b(i)).
  static GroupSpec symmetric(int n);
  /// Symmetries of the regular n-gon, n >= 3, order 2n.
  static GroupSpec dihedral(int n);

  GroupFamily family() const { return family_; }
  const std::vector<std::int64_t>& moduli() const { return moduli_; }
  int degree() const { return degree_; }

  bool is_finite() const { return finite_; }
  bool is_abelian() const { return abelian_; }
  /// pre: is_finite().
  std::uint64_t order() const;

  Element identity() const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  /// a b a^{-1}.
  Element conjugate(const Element& a, const Element& b) const;

  /// Throws std::invalid_argument on wrong arity, out-of-range symbols,
  /// or non-canonical encodings.
  void validate_element(const Element& a) const;

  /// Human-readable form: "(1,0)" / cycle notation / "r2s".
  std::string to_string(const Element& a) const;

  bool operator==(const GroupSpec& o) const = default;

 private:
  GroupSpec() = default;

  GroupFamily family_ = GroupFamily::lattice;
  std::vector<std::int64_t> moduli_;  // lattice only
  int degree_ = 0;                    // symmetric/dihedral n
  bool finite_ = true;
  bool abelian_ = true;
};

/// Dense indexing of a finite group in lexicographic encoding order
/// (identity first).  Built once, then shared read-only.
struct GroupIndex {
  std::vector<Element> elements;
  std::unordered_map<Element, std::uint32_t, ElementHash> position;

  std::uint32_t at(const Element& e) const;
  std::size_t size() const { return elements.size(); }
};

/// pre: g.is_finite().  post: elements sorted, identity at index 0.
GroupIndex enumerate_group(const GroupSpec& g);

/// Conjugacy classes of a finite group, each class sorted, classes ordered
/// by their least element.  pre: g.is_finite() and order <= 20000.
std::vector<std::vector<Element>> conjugacy_classes(const GroupSpec& g);

struct DiameterResult {
  std::uint64_t diameter = 0;  // eccentricity of the identity over the
                               // reachable set when `generates` is false
  bool generates = false;
};

/// BFS eccentricity of the identity in the Cayley graph on `steps`.
/// pre: g.is_finite(); steps closed under inverse.
DiameterResult cayley_diameter(const GroupSpec& g,
                               const std::vector<Element>& steps);

}  // namespace cirw
