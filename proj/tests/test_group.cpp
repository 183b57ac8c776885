#include "doctest.h"

#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "cirw/group.hpp"

using namespace cirw;

namespace {

// Uniform random element, independent of enumeration order.
Element random_element(const GroupSpec& g, std::mt19937_64& rng) {
  switch (g.family()) {
    case GroupFamily::lattice: {
      Element e(g.moduli().size());
      for (std::size_t j = 0; j < e.size(); ++j) {
        const std::int64_t m = g.moduli()[j];
        if (m > 0) {
          e[j] = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(m));
        } else {
          e[j] = static_cast<std::int64_t>(rng() % 101) - 50;
        }
      }
      return e;
    }
    case GroupFamily::symmetric: {
      Element e(static_cast<std::size_t>(g.degree()));
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::int64_t>(i);
      for (std::size_t i = e.size(); i > 1; --i)
        std::swap(e[i - 1], e[rng() % i]);
      return e;
    }
    case GroupFamily::dihedral:
      return Element{static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(g.degree())),
                     static_cast<std::int64_t>(rng() % 2)};
  }
  throw std::logic_error("unreachable");
}

void check_axioms(const GroupSpec& g, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Element id = g.identity();
  for (int i = 0; i < trials; ++i) {
    const Element a = random_element(g, rng);
    const Element b = random_element(g, rng);
    const Element c = random_element(g, rng);
    CHECK(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)));
    CHECK(g.multiply(a, id) == a);
    CHECK(g.multiply(id, a) == a);
    CHECK(g.multiply(a, g.inverse(a)) == id);
    CHECK(g.multiply(g.inverse(a), a) == id);
    CHECK(g.inverse(g.multiply(a, b)) == g.multiply(g.inverse(b), g.inverse(a)));
    g.validate_element(a);
  }
}

}  // namespace

TEST_CASE("group axioms hold on random triples") {
  check_axioms(GroupSpec::lattice({0}), 2000, 1);
  check_axioms(GroupSpec::lattice({0, 0}), 2000, 2);
  check_axioms(GroupSpec::lattice({12}), 2000, 3);
  check_axioms(GroupSpec::hypercube(6), 2000, 4);
  check_axioms(GroupSpec::symmetric(5), 2000, 5);
  check_axioms(GroupSpec::dihedral(7), 2000, 6);
}

TEST_CASE("lattice arithmetic wraps modulo the moduli") {
  const auto g = GroupSpec::lattice({5, 0});
  CHECK(g.multiply({4, 3}, {3, -7}) == Element{2, -4});
  CHECK(g.inverse({2, 3}) == Element{3, -3});
  CHECK(g.identity() == Element{0, 0});
  CHECK_THROWS_AS(g.validate_element({5, 0}), std::invalid_argument);
  CHECK_THROWS_AS(g.validate_element({1}), std::invalid_argument);
}

TEST_CASE("hypercube elements are involutions") {
  const auto g = GroupSpec::hypercube(4);
  CHECK(g.order() == 16);
  const Element x{1, 0, 1, 1};
  CHECK(g.inverse(x) == x);
  CHECK(g.multiply(x, x) == g.identity());
  CHECK(g.is_abelian());
}

TEST_CASE("permutations compose as a(b(i))") {
  const auto g = GroupSpec::symmetric(3);
  const Element a{1, 2, 0};  // 0->1, 1->2, 2->0
  const Element b{1, 0, 2};  // swap 0,1
  CHECK(g.multiply(a, b) == Element{2, 1, 0});
  CHECK(g.multiply(b, a) == Element{0, 2, 1});
  CHECK(g.inverse(a) == Element{2, 0, 1});
  CHECK_FALSE(g.is_abelian());
}

TEST_CASE("dihedral product matches the vertex-permutation representation") {
  // (r, s) acts on vertex i as i -> r + (-1)^s i mod n; composing the
  // actions must agree with multiply for every pair of elements.
  for (int n : {4, 5, 6}) {
    const auto g = GroupSpec::dihedral(n);
    std::vector<Element> all;
    for (std::int64_t r = 0; r < n; ++r)
      for (std::int64_t s = 0; s < 2; ++s) all.push_back({r, s});

    auto act = [n](const Element& e, std::int64_t i) {
      const std::int64_t v = e[1] ? -i : i;
      return (((e[0] + v) % n) + n) % n;
    };
    for (const Element& a : all)
      for (const Element& b : all) {
        const Element p = g.multiply(a, b);
        for (std::int64_t i = 0; i < n; ++i)
          CHECK(act(p, i) == act(a, act(b, i)));
      }
  }
}

TEST_CASE("conjugation is a b a^{-1}") {
  const auto g = GroupSpec::symmetric(4);
  const Element a{1, 0, 2, 3};
  const Element b{0, 2, 1, 3};
  CHECK(g.conjugate(a, b) == g.multiply(g.multiply(a, b), g.inverse(a)));
  // conjugating a transposition relabels its symbols
  CHECK(g.conjugate(a, b) == Element{2, 1, 0, 3});
}

TEST_CASE("orders of the supported families") {
  CHECK(GroupSpec::symmetric(4).order() == 24);
  CHECK(GroupSpec::dihedral(5).order() == 10);
  CHECK(GroupSpec::hypercube(3).order() == 8);
  CHECK(GroupSpec::lattice({12}).order() == 12);
  CHECK(GroupSpec::lattice({3, 4}).order() == 12);
  CHECK_FALSE(GroupSpec::lattice({0}).is_finite());
  CHECK(GroupSpec::lattice({0}).is_abelian());
}

TEST_CASE("constructor argument validation") {
  CHECK_THROWS_AS(GroupSpec::symmetric(1), std::invalid_argument);
  CHECK_THROWS_AS(GroupSpec::symmetric(10), std::invalid_argument);
  CHECK_THROWS_AS(GroupSpec::dihedral(2), std::invalid_argument);
  CHECK_THROWS_AS(GroupSpec::hypercube(0), std::invalid_argument);
  CHECK_THROWS_AS(GroupSpec::lattice({-3}), std::invalid_argument);
  CHECK_THROWS_AS(GroupSpec::lattice({1}), std::invalid_argument);
}

TEST_CASE("enumeration is sorted, complete, and starts at the identity") {
  for (const auto& g : {GroupSpec::symmetric(4), GroupSpec::dihedral(6),
                        GroupSpec::hypercube(3), GroupSpec::lattice({4, 3})}) {
    const GroupIndex idx = enumerate_group(g);
    CHECK(idx.size() == g.order());
    CHECK(idx.elements.front() == g.identity());
    CHECK(idx.at(g.identity()) == 0);
    CHECK(std::is_sorted(idx.elements.begin(), idx.elements.end()));
    const std::set<Element> uniq(idx.elements.begin(), idx.elements.end());
    CHECK(uniq.size() == idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      CHECK(idx.at(idx.elements[i]) == i);
  }
  CHECK_THROWS_AS(enumerate_group(GroupSpec::lattice({0})), std::domain_error);
  const GroupIndex idx = enumerate_group(GroupSpec::hypercube(2));
  CHECK_THROWS_AS(idx.at(Element{5, 5}), std::out_of_range);
}

TEST_CASE("conjugacy classes of S_4 have the textbook sizes") {
  const auto g = GroupSpec::symmetric(4);
  auto classes = conjugacy_classes(g);
  std::multiset<std::size_t> sizes;
  for (const auto& c : classes) sizes.insert(c.size());
  CHECK(sizes == std::multiset<std::size_t>{1, 3, 6, 6, 8});
  std::size_t total = 0;
  for (const auto& c : classes) total += c.size();
  CHECK(total == 24);
}

TEST_CASE("conjugacy classes of abelian and dihedral groups") {
  CHECK(conjugacy_classes(GroupSpec::lattice({5})).size() == 5);
  // D_4: {e}, {r^2}, {r, r^3}, {s, r^2 s}, {r s, r^3 s}
  auto classes = conjugacy_classes(GroupSpec::dihedral(4));
  std::multiset<std::size_t> sizes;
  for (const auto& c : classes) sizes.insert(c.size());
  CHECK(sizes == std::multiset<std::size_t>{1, 1, 2, 2, 2});
}

TEST_CASE("word metric diameters against hand counts") {
  {
    const auto g = GroupSpec::hypercube(5);
    std::vector<Element> gens;
    for (int k = 0; k < 5; ++k) {
      Element e(5, 0);
      e[static_cast<std::size_t>(k)] = 1;
      gens.push_back(e);
    }
    const auto d = cayley_diameter(g, gens);
    CHECK(d.generates);
    CHECK(d.diameter == 5);
  }
  {
    const auto g = GroupSpec::lattice({12});
    const auto d = cayley_diameter(g, {Element{1}, Element{11}});
    CHECK(d.generates);
    CHECK(d.diameter == 6);
  }
  {
    // every permutation of 3 symbols is a product of at most 2 transpositions
    const auto g = GroupSpec::symmetric(3);
    const auto d = cayley_diameter(
        g, {Element{1, 0, 2}, Element{0, 2, 1}, Element{2, 1, 0}});
    CHECK(d.generates);
    CHECK(d.diameter == 2);
  }
  {
    // {2} generates only the even residues of Z_4
    const auto g = GroupSpec::lattice({4});
    const auto d = cayley_diameter(g, {Element{2}});
    CHECK_FALSE(d.generates);
  }
}

TEST_CASE("element formatting is family-aware") {
  const auto s3 = GroupSpec::symmetric(3);
  CHECK(s3.to_string(s3.identity()) == "()");
  CHECK(s3.to_string({1, 0, 2}) == "(1 2)");
  const auto d4 = GroupSpec::dihedral(4);
  CHECK(d4.to_string({0, 0}) == "e");
  CHECK(d4.to_string({2, 1}) == "r2s");
  const auto z2 = GroupSpec::lattice({0, 0});
  CHECK(z2.to_string({3, -2}).find('3') != std::string::npos);
  CHECK(z2.to_string({3, -2}).find("-2") != std::string::npos);
}
