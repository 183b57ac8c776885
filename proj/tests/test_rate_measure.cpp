#include "doctest.h"

#include <stdexcept>

#include "cirw/rate_measure.hpp"

using namespace cirw;

TEST_CASE("from_generators mirrors each generator onto its inverse") {
  const auto g = GroupSpec::lattice({0});
  const auto mu = RateMeasure::from_generators(g, {{{1}, 0.5}});
  CHECK(mu.support_size() == 2);
  CHECK(mu.generator_count() == 1);
  CHECK(mu.at({1}) == 0.5);
  CHECK(mu.at({-1}) == 0.5);
  CHECK(mu.at({2}) == 0.0);
  CHECK(mu.total_mass() == 1.0);
  CHECK(mu.min_rate() == 0.5);
  CHECK_FALSE(mu.generator_is_involution()[0]);
}

TEST_CASE("involutions appear once and are flagged") {
  const auto g = GroupSpec::hypercube(3);
  const auto mu = RateMeasure::from_generators(
      g, {{{1, 0, 0}, 0.25}, {{0, 1, 0}, 0.25}, {{0, 0, 1}, 0.5}});
  CHECK(mu.support_size() == 3);
  CHECK(mu.generator_count() == 3);
  CHECK(mu.total_mass() == 1.0);
  CHECK(mu.min_rate() == 0.25);
  for (bool inv : mu.generator_is_involution()) CHECK(inv);
}

TEST_CASE("entries and generators are sorted by element") {
  const auto g = GroupSpec::symmetric(3);
  const auto mu = RateMeasure::from_generators(
      g, {{{2, 1, 0}, 0.2}, {{1, 0, 2}, 0.2}, {{0, 2, 1}, 0.2}});
  CHECK(std::is_sorted(mu.entries().begin(), mu.entries().end()));
  CHECK(std::is_sorted(mu.generators().begin(), mu.generators().end()));
  CHECK(mu.support_size() == 3);  // transpositions are involutions
}

TEST_CASE("constructor rejects malformed measures") {
  const auto g = GroupSpec::lattice({0});
  CHECK_THROWS_AS(RateMeasure(g, {}), std::invalid_argument);
  CHECK_THROWS_AS(RateMeasure(g, {{{0}, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(RateMeasure(g, {{{1}, -0.5}, {{-1}, -0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(RateMeasure(g, {{{1}, 0.5}, {{1}, 0.5}}),
                  std::invalid_argument);
  // asymmetric rates violate reversibility
  CHECK_THROWS_AS(RateMeasure(g, {{{1}, 0.3}, {{-1}, 0.7}}),
                  std::invalid_argument);
  // missing inverse entirely
  CHECK_THROWS_AS(RateMeasure(g, {{{1}, 0.5}}), std::invalid_argument);
}

TEST_CASE("class-constant measures validate cleanly") {
  const auto g = GroupSpec::symmetric(4);
  std::vector<std::pair<Element, double>> gens;
  const GroupIndex idx = enumerate_group(g);
  for (const Element& e : idx.elements) {
    // transpositions: exactly two displaced symbols
    int moved = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != static_cast<std::int64_t>(i)) ++moved;
    if (moved == 2) gens.emplace_back(e, 1.0 / 6.0);
  }
  const auto mu = RateMeasure::from_generators(g, gens);
  const auto v = validate_rate_measure(g, mu);
  CHECK(v.ok());
  CHECK(v.reversible);
  CHECK(v.conjugacy == ConjugacyStatus::satisfied);
  CHECK(v.violations.empty());
  CHECK(v.total_mass == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.generator_count == 6);
}

TEST_CASE("uneven rates on one class are caught with a witness") {
  const auto g = GroupSpec::symmetric(3);
  const auto mu = RateMeasure::from_generators(
      g, {{{1, 0, 2}, 0.2}, {{0, 2, 1}, 0.2}, {{2, 1, 0}, 0.1}});
  const auto v = validate_rate_measure(g, mu);
  CHECK_FALSE(v.ok());
  CHECK(v.conjugacy == ConjugacyStatus::violated);
  REQUIRE_FALSE(v.violations.empty());
  const auto& [x, z] = v.violations.front();
  CHECK(mu.at(g.conjugate(x, z)) != mu.at(z));
}

TEST_CASE("a class must be covered in full") {
  const auto g = GroupSpec::symmetric(3);
  const auto mu = RateMeasure::from_generators(g, {{{1, 0, 2}, 1.0}});
  const auto v = validate_rate_measure(g, mu);
  CHECK(v.conjugacy == ConjugacyStatus::violated);
}

TEST_CASE("abelian groups are conjugacy-invariant for free") {
  const auto g = GroupSpec::lattice({0, 0});
  const auto mu =
      RateMeasure::from_generators(g, {{{1, 0}, 0.4}, {{0, 1}, 0.1}});
  const auto v = validate_rate_measure(g, mu);
  CHECK(v.ok());
  CHECK(v.conjugacy == ConjugacyStatus::satisfied_trivially);
}

TEST_CASE("support lists both halves of every pair") {
  const auto g = GroupSpec::lattice({12});
  const auto mu = RateMeasure::from_generators(g, {{{1}, 0.3}, {{3}, 0.2}});
  const auto sup = mu.support();
  CHECK(sup.size() == 4);
  CHECK(mu.at({11}) == 0.3);
  CHECK(mu.at({9}) == 0.2);
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
}
