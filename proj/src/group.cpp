#include "cirw/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cirw {

namespace {

std::int64_t mod_reduce(std::int64_t v, std::int64_t m) {
  std::int64_t r = v % m;
  return r < 0 ? r + m : r;
}

}  // namespace

GroupSpec GroupSpec::lattice(std::vector<std::int64_t> moduli) {
  if (moduli.empty()) throw std::invalid_argument("lattice: needs >= 1 factor");
  for (std::int64_t m : moduli)
    if (m < 0 || m == 1)
      throw std::invalid_argument("lattice: moduli must be 0 (infinite) or >= 2");
  GroupSpec g;
  g.family_ = GroupFamily::lattice;
  g.degree_ = static_cast<int>(moduli.size());
  g.finite_ = std::all_of(moduli.begin(), moduli.end(),
                          [](std::int64_t m) { return m > 0; });
  g.abelian_ = true;
  g.moduli_ = std::move(moduli);
  return g;
}

GroupSpec GroupSpec::hypercube(int d) {
  if (d < 1 || d > 20) throw std::invalid_argument("hypercube: d in [1, 20]");
  return lattice(std::vector<std::int64_t>(d, 2));
}

GroupSpec GroupSpec::symmetric(int n) {
  if (n < 2 || n > 9)
    throw std::invalid_argument("symmetric: n in [2, 9] (enumerable range)");
  GroupSpec g;
  g.family_ = GroupFamily::symmetric;
  g.degree_ = n;
  g.finite_ = true;
  g.abelian_ = (n <= 2);
  return g;
}

GroupSpec GroupSpec::dihedral(int n) {
  if (n < 3 || n > 1'000'000)
    throw std::invalid_argument("dihedral: n >= 3");
  GroupSpec g;
  g.family_ = GroupFamily::dihedral;
  g.degree_ = n;
  g.finite_ = true;
  g.abelian_ = false;
  return g;
}

std::uint64_t GroupSpec::order() const {
  if (!finite_) throw std::domain_error("order: infinite group");
  switch (family_) {
    case GroupFamily::lattice: {
      std::uint64_t o = 1;
      for (std::int64_t m : moduli_) {
        if (o > (1ull << 62) / std::uint64_t(m))
          throw std::overflow_error("order: lattice too large");
        o *= std::uint64_t(m);
      }
      return o;
    }
    case GroupFamily::symmetric: {
      std::uint64_t o = 1;
      for (int k = 2; k <= degree_; ++k) o *= std::uint64_t(k);
      return o;
    }
    case GroupFamily::dihedral:
      return 2ull * std::uint64_t(degree_);
  }
  throw std::logic_error("order: unreachable");
}

Element GroupSpec::identity() const {
  switch (family_) {
    case GroupFamily::lattice:
      return Element(moduli_.size(), 0);
    case GroupFamily::symmetric: {
      Element e(degree_);
      std::iota(e.begin(), e.end(), 0);
      return e;
    }
    case GroupFamily::dihedral:
      return Element{0, 0};
  }
  throw std::logic_error("identity: unreachable");
}

Element GroupSpec::multiply(const Element& a, const Element& b) const {
  switch (family_) {
    case GroupFamily::lattice: {
      Element c(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) {
        c[j] = a[j] + b[j];
        if (moduli_[j] > 0) c[j] = mod_reduce(c[j], moduli_[j]);
      }
      return c;
    }
    case GroupFamily::symmetric: {
      Element c(a.size());
      for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[static_cast<std::size_t>(b[i])];
      return c;
    }
    case GroupFamily::dihedral: {
      // rot^{r1} ref^{s1} * rot^{r2} ref^{s2}
      //   = rot^{r1 + (-1)^{s1} r2} ref^{s1 xor s2}.
      std::int64_t n = degree_;
      std::int64_t r = mod_reduce(a[0] + (a[1] ? n - b[0] : b[0]), n);
      return Element{r, a[1] ^ b[1]};
    }
  }
  throw std::logic_error("multiply: unreachable");
}

Element GroupSpec::inverse(const Element& a) const {
  switch (family_) {
    case GroupFamily::lattice: {
      Element c(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) {
        c[j] = -a[j];
        if (moduli_[j] > 0) c[j] = mod_reduce(c[j], moduli_[j]);
      }
      return c;
    }
    case GroupFamily::symmetric: {
      Element c(a.size());
      for (std::size_t i = 0; i < a.size(); ++i)
        c[static_cast<std::size_t>(a[i])] = static_cast<std::int64_t>(i);
      return c;
    }
    case GroupFamily::dihedral: {
      if (a[1]) return a;  // reflections are involutions
      return Element{a[0] == 0 ? 0 : degree_ - a[0], 0};
    }
  }
  throw std::logic_error("inverse: unreachable");
}

Element GroupSpec::conjugate(const Element& a, const Element& b) const {
  return multiply(multiply(a, b), inverse(a));
}

void GroupSpec::validate_element(const Element& a) const {
  switch (family_) {
    case GroupFamily::lattice: {
      if (a.size() != moduli_.size())
        throw std::invalid_argument("element: wrong arity for lattice");
      for (std::size_t j = 0; j < a.size(); ++j)
        if (moduli_[j] > 0 && (a[j] < 0 || a[j] >= moduli_[j]))
          throw std::invalid_argument(
              "element: coordinate outside canonical range [0, m)");
      return;
    }
    case GroupFamily::symmetric: {
      if (a.size() != static_cast<std::size_t>(degree_))
        throw std::invalid_argument("element: wrong arity for permutation");
      std::vector<bool> seen(a.size(), false);
      for (std::int64_t v : a) {
        if (v < 0 || v >= degree_)
          throw std::invalid_argument("element: symbol out of range");
        if (seen[static_cast<std::size_t>(v)])
          throw std::invalid_argument("element: repeated symbol");
        seen[static_cast<std::size_t>(v)] = true;
      }
      return;
    }
    case GroupFamily::dihedral: {
      if (a.size() != 2)
        throw std::invalid_argument("element: wrong arity for dihedral");
      if (a[0] < 0 || a[0] >= degree_)
        throw std::invalid_argument("element: rotation exponent out of range");
      if (a[1] != 0 && a[1] != 1)
        throw std::invalid_argument("element: reflection bit must be 0 or 1");
      return;
    }
  }
}

std::string GroupSpec::to_string(const Element& a) const {
  std::ostringstream os;
  switch (family_) {
    case GroupFamily::lattice: {
      os << '(';
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (j) os << ',';
        os << a[j];
      }
      os << ')';
      return os.str();
    }
    case GroupFamily::symmetric: {
      // Cycle notation, 1-based, fixed points omitted; identity is "()".
      std::vector<bool> seen(a.size(), false);
      bool any = false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (seen[i] || a[i] == static_cast<std::int64_t>(i)) continue;
        os << '(';
        std::size_t j = i;
        bool first = true;
        while (!seen[j]) {
          seen[j] = true;
          if (!first) os << ' ';
          os << (j + 1);
          first = false;
          j = static_cast<std::size_t>(a[j]);
        }
        os << ')';
        any = true;
      }
      if (!any) os << "()";
      return os.str();
    }
    case GroupFamily::dihedral: {
      if (a[0] == 0 && a[1] == 0) return "e";
      if (a[0] == 1) os << 'r';
      else if (a[0] > 1) os << 'r' << a[0];
      if (a[1]) os << 's';
      return os.str();
    }
  }
  throw std::logic_error("to_string: unreachable");
}

std::uint32_t GroupIndex::at(const Element& e) const {
  auto it = position.find(e);
  if (it == position.end())
    throw std::out_of_range("GroupIndex: element not in group");
  return it->second;
}

GroupIndex enumerate_group(const GroupSpec& g) {
  if (!g.is_finite())
    throw std::domain_error("enumerate_group: infinite group");
  GroupIndex idx;
  idx.elements.reserve(g.order());
  switch (g.family()) {
    case GroupFamily::lattice: {
      // Mixed-radix counting == lexicographic order, identity first.
      const auto& m = g.moduli();
      Element cur(m.size(), 0);
      for (;;) {
        idx.elements.push_back(cur);
        std::size_t j = m.size();
        while (j > 0) {
          --j;
          if (++cur[j] < m[j]) break;
          cur[j] = 0;
          if (j == 0) goto done_lattice;
        }
        if (m.size() == 0) break;
      }
    done_lattice:
      break;
    }
    case GroupFamily::symmetric: {
      Element cur = g.identity();
      do {
        idx.elements.push_back(cur);
      } while (std::next_permutation(cur.begin(), cur.end()));
      break;
    }
    case GroupFamily::dihedral: {
      for (std::int64_t r = 0; r < g.degree(); ++r)
        for (std::int64_t s = 0; s <= 1; ++s)
          idx.elements.push_back(Element{r, s});
      break;
    }
  }
  idx.position.reserve(idx.elements.size() * 2);
  for (std::uint32_t i = 0; i < idx.elements.size(); ++i)
    idx.position.emplace(idx.elements[i], i);
  return idx;
}

std::vector<std::vector<Element>> conjugacy_classes(const GroupSpec& g) {
  if (!g.is_finite())
    throw std::domain_error("conjugacy_classes: infinite group");
  if (g.order() > 20000)
    throw std::length_error("conjugacy_classes: order > 20000");
  GroupIndex idx = enumerate_group(g);

  std::vector<std::vector<Element>> classes;
  if (g.is_abelian()) {
    for (const Element& e : idx.elements) classes.push_back({e});
    return classes;
  }
  std::vector<bool> assigned(idx.size(), false);
  for (std::uint32_t i = 0; i < idx.size(); ++i) {
    if (assigned[i]) continue;
    std::vector<Element> cls;
    for (const Element& x : idx.elements) {
      Element c = g.conjugate(x, idx.elements[i]);
      std::uint32_t j = idx.at(c);
      if (!assigned[j]) {
        assigned[j] = true;
        cls.push_back(std::move(c));
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

DiameterResult cayley_diameter(const GroupSpec& g,
                               const std::vector<Element>& steps) {
  if (!g.is_finite())
    throw std::domain_error("cayley_diameter: infinite group");
  GroupIndex idx = enumerate_group(g);
  std::vector<std::int64_t> dist(idx.size(), -1);
  std::deque<std::uint32_t> queue;
  std::uint32_t root = idx.at(g.identity());
  dist[root] = 0;
  queue.push_back(root);
  std::uint64_t ecc = 0;
  std::size_t reached = 1;
  while (!queue.empty()) {
    std::uint32_t u = queue.front();
    queue.pop_front();
    for (const Element& s : steps) {
      std::uint32_t v = idx.at(g.multiply(idx.elements[u], s));
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        ecc = std::max(ecc, static_cast<std::uint64_t>(dist[v]));
        ++reached;
        queue.push_back(v);
      }
    }
  }
  return DiameterResult{ecc, reached == idx.size()};
}

}  // namespace cirw
