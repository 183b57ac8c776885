#include "cirw/rate_measure.hpp"

#include <algorithm>
#include <stdexcept>

#include "cirw/numeric.hpp"

namespace cirw {

RateMeasure::RateMeasure(const GroupSpec& g,
                         std::vector<std::pair<Element, double>> entries) {
  if (entries.empty())
    throw std::invalid_argument("RateMeasure: empty support");
  const Element id = g.identity();
  for (const auto& [z, r] : entries) {
    g.validate_element(z);
    if (z == id)
      throw std::invalid_argument("RateMeasure: identity carries positive mass");
    if (!(r > 0.0))
      throw std::invalid_argument("RateMeasure: rates must be positive");
  }
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].first == entries[i - 1].first)
      throw std::invalid_argument("RateMeasure: duplicate support element");
  entries_ = std::move(entries);

  // Reversibility, bit-exact, and the pair decomposition in one pass.
  CompensatedSum mass;
  min_rate_ = entries_.front().second;
  for (const auto& [z, r] : entries_) {
    mass.add(r);
    min_rate_ = std::min(min_rate_, r);
    Element zi = g.inverse(z);
    double ri = at(zi);
    if (!(ri == r))
      throw std::invalid_argument(
          "RateMeasure: mu(z) != mu(z^-1) (reversibility violated at " +
          g.to_string(z) + ")");
    if (zi == z) {
      generators_.emplace_back(z, r);
      involution_.push_back(true);
    } else if (z < zi) {
      generators_.emplace_back(z, r);
      involution_.push_back(false);
    }
  }
  total_mass_ = mass.value();
}

RateMeasure RateMeasure::from_generators(
    const GroupSpec& g, const std::vector<std::pair<Element, double>>& gens) {
  std::vector<std::pair<Element, double>> entries;
  for (const auto& [e, r] : gens) {
    g.validate_element(e);
    Element ei = g.inverse(e);
    entries.emplace_back(e, r);
    if (ei != e) entries.emplace_back(std::move(ei), r);
  }
  return RateMeasure(g, std::move(entries));
}

double RateMeasure::at(const Element& z) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), z,
      [](const auto& kv, const Element& key) { return kv.first < key; });
  if (it != entries_.end() && it->first == z) return it->second;
  return 0.0;
}

std::vector<Element> RateMeasure::support() const {
  std::vector<Element> s;
  s.reserve(entries_.size());
  for (const auto& [z, _] : entries_) s.push_back(z);
  return s;
}

ValidationReport validate_rate_measure(const GroupSpec& g,
                                       const RateMeasure& mu) {
  ValidationReport rep;
  rep.total_mass = mu.total_mass();
  rep.min_rate = mu.min_rate();
  rep.generator_count = mu.generator_count();

  if (g.is_abelian()) {
    rep.conjugacy = ConjugacyStatus::satisfied_trivially;
    return rep;
  }
  if (!g.is_finite()) {
    rep.conjugacy = ConjugacyStatus::unsupported;
    return rep;
  }
  GroupIndex idx = enumerate_group(g);
  for (const Element& x : idx.elements) {
    for (const auto& [z, r] : mu.entries()) {
      if (!(mu.at(g.conjugate(x, z)) == r))
        rep.violations.emplace_back(x, z);
    }
  }
  rep.conjugacy = rep.violations.empty() ? ConjugacyStatus::satisfied
                                         : ConjugacyStatus::violated;
  return rep;
}

}  // namespace cirw
