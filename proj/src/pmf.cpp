#include "cirw/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cirw/numeric.hpp"

namespace cirw {

Pmf Pmf::from_entries(std::vector<std::pair<Element, double>> entries,
                      double deficit) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Pmf p;
  p.deficit_ = deficit;
  p.entries_.reserve(entries.size());
  for (auto& [x, w] : entries) {
    if (w < 0.0) throw std::invalid_argument("Pmf: negative weight");
    if (!p.entries_.empty() && p.entries_.back().first == x)
      p.entries_.back().second += w;
    else
      p.entries_.emplace_back(std::move(x), w);
  }
  std::erase_if(p.entries_, [](const auto& kv) { return kv.second == 0.0; });
  return p;
}

double Pmf::at(const Element& x) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), x,
      [](const auto& kv, const Element& key) { return kv.first < key; });
  if (it != entries_.end() && it->first == x) return it->second;
  return 0.0;
}

double Pmf::tracked_mass() const {
  CompensatedSum s;
  for (const auto& [_, w] : entries_) s.add(w);
  return s.value();
}

double Pmf::mass_error() const {
  return std::abs(tracked_mass() + deficit_ - 1.0);
}

double tv_distance(const Pmf& p, const Pmf& q) {
  CompensatedSum s;
  const auto& a = p.entries();
  const auto& b = q.entries();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      s.add(a[i].second);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      s.add(b[j].second);
      ++j;
    } else {
      s.add(std::abs(a[i].second - b[j].second));
      ++i;
      ++j;
    }
  }
  return 0.5 * s.value();
}

double tv_to_uniform(const Pmf& p, std::uint64_t order) {
  if (order == 0) throw std::domain_error("tv_to_uniform: order must be > 0");
  const double u = 1.0 / static_cast<double>(order);
  CompensatedSum s;
  for (const auto& [_, w] : p.entries()) s.add(std::abs(w - u));
  s.add(static_cast<double>(order - p.support_size()) * u);
  return 0.5 * s.value();
}

InfoStats info_stats(const Pmf& p) {
  if (p.entries().empty()) throw std::domain_error("info_stats: empty law");
  if (!(p.deficit() < 1e-8))
    throw std::domain_error("info_stats: deficit >= 1e-8, kernel too coarse");

  const double mass = p.tracked_mass();
  InfoStats st;
  st.deficit = p.deficit();

  // Renormalized info contents; entropy first, then the central second
  // moment against it so varentropy is a sum of non-negative terms.
  std::vector<double> info(p.support_size());
  std::vector<double> prob(p.support_size());
  CompensatedSum h;
  for (std::size_t i = 0; i < p.entries().size(); ++i) {
    prob[i] = p.entries()[i].second / mass;
    info[i] = -std::log(prob[i]);
    h.add(prob[i] * info[i]);
  }
  st.entropy = h.value();
  CompensatedSum v;
  for (std::size_t i = 0; i < info.size(); ++i) {
    double d = info[i] - st.entropy;
    v.add(prob[i] * d * d);
  }
  st.varentropy = v.value();

  // Quantiles of the info-content distribution.
  std::vector<std::size_t> by_info(info.size());
  for (std::size_t i = 0; i < info.size(); ++i) by_info[i] = i;
  std::stable_sort(by_info.begin(), by_info.end(),
                   [&](std::size_t a, std::size_t b) { return info[a] < info[b]; });
  static constexpr double kLevels[] = {0.01, 0.05, 0.1, 0.25, 0.5,
                                       0.75, 0.9,  0.95, 0.99};
  CompensatedSum cum;
  std::size_t pos = 0;
  for (double level : kLevels) {
    while (pos < by_info.size() && cum.value() < level) {
      cum.add(prob[by_info[pos]]);
      ++pos;
    }
    std::size_t idx = pos > 0 ? pos - 1 : 0;
    st.info_quantiles.emplace_back(level, info[by_info[idx]]);
  }
  return st;
}

}  // namespace cirw
