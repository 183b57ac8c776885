#include "cirw/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "cirw/kernels.hpp"
#include "cirw/numeric.hpp"

namespace cirw {

namespace {

void check_kernel_args(const RateMeasure& mu, const std::vector<double>& ts,
                       double tol) {
  for (double t : ts)
    if (!(t >= 0.0)) throw std::domain_error("heat_kernel: t must be >= 0");
  if (!(tol > 0.0 && tol <= 1e-6))
    throw std::domain_error("heat_kernel: tol must be in (0, 1e-6]");
  if (!(std::abs(mu.total_mass() - 1.0) <= 1e-9))
    throw std::domain_error(
        "heat_kernel: total jump rate must be 1 (normalize the measure)");
}

struct GridPlan {
  std::vector<PoissonWeights> pw;
  int n_all = 0;
};

GridPlan plan_grid(const std::vector<double>& ts, double tol) {
  GridPlan plan;
  plan.pw.reserve(ts.size());
  for (double t : ts) {
    plan.pw.push_back(poisson_weights(t, tol));
    plan.n_all = std::max(plan.n_all, plan.pw.back().n_max);
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Dense path (finite groups).

std::vector<Pmf> grid_dense(const GroupSpec& g, const RateMeasure& mu,
                            const std::vector<double>& ts, const GridPlan& plan) {
  const GroupIndex idx = enumerate_group(g);
  const std::size_t n = idx.size();
  const auto& sup = mu.entries();
  const std::size_t s_count = sup.size();
  const double total = mu.total_mass();

  std::vector<double> rate(s_count);
  std::vector<std::uint32_t> gather(s_count * n);
  for (std::size_t k = 0; k < s_count; ++k) {
    rate[k] = sup[k].second / total;
    const Element z_inv = g.inverse(sup[k].first);
    for (std::size_t x = 0; x < n; ++x)
      gather[k * n + x] = idx.at(g.multiply(idx.elements[x], z_inv));
  }

  std::vector<double> cur(n, 0.0), next;
  cur[0] = 1.0;  // identity is element 0 in enumeration order
  std::vector<std::vector<double>> acc(ts.size(), std::vector<double>(n, 0.0));
  for (int step = 0; step <= plan.n_all; ++step) {
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      const auto& pw = plan.pw[ti];
      if (step > pw.n_max) continue;
      const double w = pw.weights[static_cast<std::size_t>(step)];
      if (w == 0.0) continue;
      for (std::size_t x = 0; x < n; ++x) acc[ti][x] += w * cur[x];
    }
    if (step < plan.n_all) {
      kernels::dense_step_auto(cur, gather, rate, next);
      cur.swap(next);
    }
  }

  std::vector<Pmf> out;
  out.reserve(ts.size());
  for (std::size_t ti = 0; ti < ts.size(); ++ti) {
    std::vector<std::pair<Element, double>> entries;
    entries.reserve(n);
    for (std::size_t x = 0; x < n; ++x)
      if (acc[ti][x] != 0.0) entries.emplace_back(idx.elements[x], acc[ti][x]);
    out.push_back(Pmf::from_entries(std::move(entries), plan.pw[ti].deficit));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sparse path (infinite lattices), element keys packed into one 64-bit word
// when possible so comparisons in the hot sort/search loops are scalar.

struct LatticePacker {
  static constexpr int kBits = 16;
  static constexpr std::int64_t kBias = 1ll << (kBits - 1);

  std::vector<std::int64_t> moduli;
  int d = 0;

  static bool applicable(const GroupSpec& g, std::int64_t max_abs_coord) {
    if (g.family() != GroupFamily::lattice) return false;
    if (g.moduli().size() > 4) return false;
    for (std::int64_t m : g.moduli())
      if (m > kBias) return false;
    return max_abs_coord < kBias - 1;
  }

  explicit LatticePacker(const GroupSpec& g)
      : moduli(g.moduli()), d(static_cast<int>(g.moduli().size())) {}

  std::uint64_t pack(const Element& e) const {
    std::uint64_t key = 0;
    for (int j = 0; j < d; ++j)
      key = (key << kBits) |
            static_cast<std::uint64_t>(e[static_cast<std::size_t>(j)] + kBias);
    return key;
  }

  Element unpack(std::uint64_t key) const {
    Element e(static_cast<std::size_t>(d));
    for (int j = d - 1; j >= 0; --j) {
      e[static_cast<std::size_t>(j)] =
          static_cast<std::int64_t>(key & ((1ull << kBits) - 1)) - kBias;
      key >>= kBits;
    }
    return e;
  }

  std::uint64_t translate(std::uint64_t key, const Element& delta) const {
    std::uint64_t out = 0;
    for (int j = 0; j < d; ++j) {
      const int shift = kBits * (d - 1 - j);
      std::int64_t c =
          static_cast<std::int64_t>((key >> shift) & ((1ull << kBits) - 1)) -
          kBias + delta[static_cast<std::size_t>(j)];
      const std::int64_t m = moduli[static_cast<std::size_t>(j)];
      if (m > 0) {
        c %= m;
        if (c < 0) c += m;
      }
      out = (out << kBits) | static_cast<std::uint64_t>(c + kBias);
    }
    return out;
  }
};

using PackedVec = std::vector<std::pair<std::uint64_t, double>>;

double packed_at(const PackedVec& v, std::uint64_t key) {
  auto it = std::lower_bound(
      v.begin(), v.end(), key,
      [](const auto& kv, std::uint64_t k) { return kv.first < k; });
  if (it != v.end() && it->first == key) return it->second;
  return 0.0;
}

PackedVec packed_step(const PackedVec& in, const std::vector<Element>& step,
                      const std::vector<Element>& step_inv,
                      const std::vector<double>& rate,
                      const LatticePacker& packer) {
  std::vector<std::uint64_t> cand;
  cand.reserve(in.size() * step.size());
  for (const auto& [key, _] : in)
    for (const Element& z : step) cand.push_back(packer.translate(key, z));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  PackedVec out(cand.size());
  const bool parallel = kernels::num_threads() > 1;
  const std::int64_t nc = static_cast<std::int64_t>(cand.size());
#pragma omp parallel for schedule(static) \
    num_threads(kernels::num_threads()) if (parallel)
  for (std::int64_t i = 0; i < nc; ++i) {
    const std::uint64_t y = cand[static_cast<std::size_t>(i)];
    double acc = 0.0;
    for (std::size_t k = 0; k < step.size(); ++k)
      acc += rate[k] * packed_at(in, packer.translate(y, step_inv[k]));
    out[static_cast<std::size_t>(i)] = {y, acc};
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

void packed_accumulate(PackedVec& acc, const PackedVec& cur, double w,
                       PackedVec& scratch) {
  scratch.clear();
  scratch.reserve(acc.size() + cur.size());
  std::size_t i = 0, j = 0;
  while (i < acc.size() || j < cur.size()) {
    if (j == cur.size() ||
        (i < acc.size() && acc[i].first < cur[j].first)) {
      scratch.push_back(acc[i]);
      ++i;
    } else if (i == acc.size() || cur[j].first < acc[i].first) {
      scratch.emplace_back(cur[j].first, w * cur[j].second);
      ++j;
    } else {
      scratch.emplace_back(acc[i].first, acc[i].second + w * cur[j].second);
      ++i;
      ++j;
    }
  }
  acc.swap(scratch);
}

std::vector<Pmf> grid_sparse_packed(const GroupSpec& g, const RateMeasure& mu,
                                    const std::vector<double>& ts,
                                    const GridPlan& plan) {
  const LatticePacker packer(g);
  const auto& sup = mu.entries();
  const double total = mu.total_mass();
  std::vector<Element> step, step_inv;
  std::vector<double> rate;
  for (const auto& [z, r] : sup) {
    step.push_back(z);
    step_inv.push_back(g.inverse(z));
    rate.push_back(r / total);
  }

  PackedVec cur{{packer.pack(g.identity()), 1.0}};
  std::vector<PackedVec> acc(ts.size());
  PackedVec scratch;
  for (int n = 0; n <= plan.n_all; ++n) {
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      const auto& pw = plan.pw[ti];
      if (n > pw.n_max) continue;
      const double w = pw.weights[static_cast<std::size_t>(n)];
      if (w != 0.0) packed_accumulate(acc[ti], cur, w, scratch);
    }
    if (n < plan.n_all) cur = packed_step(cur, step, step_inv, rate, packer);
  }

  std::vector<Pmf> out;
  out.reserve(ts.size());
  for (std::size_t ti = 0; ti < ts.size(); ++ti) {
    std::vector<std::pair<Element, double>> entries;
    entries.reserve(acc[ti].size());
    for (const auto& [key, w] : acc[ti])
      entries.emplace_back(packer.unpack(key), w);
    out.push_back(Pmf::from_entries(std::move(entries), plan.pw[ti].deficit));
  }
  return out;
}

std::vector<Pmf> grid_sparse_generic(const GroupSpec& g, const RateMeasure& mu,
                                     const std::vector<double>& ts,
                                     const GridPlan& plan) {
  kernels::SparseSupport sup;
  const double total = mu.total_mass();
  for (const auto& [z, r] : mu.entries()) {
    sup.step.push_back(z);
    sup.step_inv.push_back(g.inverse(z));
    sup.rate.push_back(r / total);
  }

  kernels::SparseVec cur{{g.identity(), 1.0}};
  std::vector<kernels::SparseVec> acc(ts.size());
  kernels::SparseVec scratch;
  for (int n = 0; n <= plan.n_all; ++n) {
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      const auto& pw = plan.pw[ti];
      if (n > pw.n_max) continue;
      const double w = pw.weights[static_cast<std::size_t>(n)];
      if (w == 0.0) continue;
      scratch.clear();
      scratch.reserve(acc[ti].size() + cur.size());
      std::size_t i = 0, j = 0;
      while (i < acc[ti].size() || j < cur.size()) {
        if (j == cur.size() ||
            (i < acc[ti].size() && acc[ti][i].first < cur[j].first)) {
          scratch.push_back(acc[ti][i]);
          ++i;
        } else if (i == acc[ti].size() || cur[j].first < acc[ti][i].first) {
          scratch.emplace_back(cur[j].first, w * cur[j].second);
          ++j;
        } else {
          scratch.emplace_back(acc[ti][i].first,
                               acc[ti][i].second + w * cur[j].second);
          ++i;
          ++j;
        }
      }
      acc[ti].swap(scratch);
    }
    if (n < plan.n_all) cur = kernels::sparse_step_auto(cur, sup, g);
  }

  std::vector<Pmf> out;
  out.reserve(ts.size());
  for (std::size_t ti = 0; ti < ts.size(); ++ti)
    out.push_back(
        Pmf::from_entries(std::move(acc[ti]), plan.pw[ti].deficit));
  return out;
}

std::int64_t max_step_coord(const RateMeasure& mu) {
  std::int64_t m = 0;
  for (const auto& [z, _] : mu.entries())
    for (std::int64_t c : z) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

std::vector<Pmf> heat_kernel_grid(const GroupSpec& g, const RateMeasure& mu,
                                  const std::vector<double>& ts, double tol) {
  check_kernel_args(mu, ts, tol);
  if (ts.empty()) return {};
  GridPlan plan = plan_grid(ts, tol);
  if (g.is_finite()) return grid_dense(g, mu, ts, plan);
  const std::int64_t reach =
      (static_cast<std::int64_t>(plan.n_all) + 1) * max_step_coord(mu);
  if (LatticePacker::applicable(g, reach))
    return grid_sparse_packed(g, mu, ts, plan);
  return grid_sparse_generic(g, mu, ts, plan);
}

Pmf heat_kernel(const GroupSpec& g, const RateMeasure& mu, double t,
                double tol) {
  return heat_kernel_grid(g, mu, {t}, tol).front();
}

Pmf convolve(const GroupSpec& g, const Pmf& p, const Pmf& q) {
  if (p.entries().empty() || q.entries().empty())
    throw std::domain_error("convolve: empty law");
  kernels::SparseSupport sup;
  for (const auto& [z, w] : q.entries()) {
    sup.step.push_back(z);
    sup.step_inv.push_back(g.inverse(z));
    sup.rate.push_back(w);
  }
  kernels::SparseVec out = kernels::sparse_step_auto(p.entries(), sup, g);
  return Pmf::from_entries(std::move(out), p.deficit() + q.deficit());
}

GammaLogResult expected_gamma_log(const GroupSpec& g, const RateMeasure& mu,
                                  const Pmf& p, double weight_floor) {
  if (p.entries().empty())
    throw std::domain_error("expected_gamma_log: empty law");
  const auto& ent = p.entries();

  GammaLogResult res;
  CompensatedSum lost;
  std::vector<std::uint32_t> kept;
  kept.reserve(ent.size());
  for (std::uint32_t i = 0; i < ent.size(); ++i) {
    if (ent[i].second > weight_floor) {
      kept.push_back(i);
    } else {
      ++res.dropped;
      lost.add(ent[i].second);
    }
  }

  std::vector<double> terms(kept.size(), 0.0);
  const bool parallel = kernels::num_threads() > 1;
  const std::int64_t nk = static_cast<std::int64_t>(kept.size());
#pragma omp parallel for schedule(static) \
    num_threads(kernels::num_threads()) if (parallel)
  for (std::int64_t j = 0; j < nk; ++j) {
    const auto& [x, w] = ent[kept[static_cast<std::size_t>(j)]];
    double s = 0.0;
    for (const auto& [z, r] : mu.entries()) {
      const double wn = p.at(g.multiply(x, z));
      if (!(wn > 0.0)) {
        s = std::numeric_limits<double>::quiet_NaN();
        break;
      }
      const double l = std::log(w / wn);
      s += r * l * l;
    }
    terms[static_cast<std::size_t>(j)] = 0.5 * w * s;
  }
  for (std::size_t j = 0; j < kept.size(); ++j) {
    if (std::isnan(terms[j])) {
      ++res.dropped;
      lost.add(ent[kept[j]].second);
      terms[j] = 0.0;
    }
  }
  res.dropped_mass = lost.value();
  if (res.dropped_mass > 1e-6)
    throw truncation_error(
        "expected_gamma_log: excluded mass exceeds 1e-6 "
        "(kernel truncated too aggressively)");
  res.value = compensated_sum(terms);
  return res;
}

}  // namespace cirw
