#include "cirw/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

namespace cirw::kernels {

namespace {
std::atomic<int> g_threads{1};

double sparse_at(const SparseVec& v, const Element& x) {
  auto it = std::lower_bound(
      v.begin(), v.end(), x,
      [](const auto& kv, const Element& key) { return kv.first < key; });
  if (it != v.end() && it->first == x) return it->second;
  return 0.0;
}

std::vector<Element> sparse_candidates(const SparseVec& in,
                                       const SparseSupport& sup,
                                       const GroupSpec& g) {
  std::vector<Element> cand;
  cand.reserve(in.size() * sup.step.size());
  for (const auto& [x, _] : in)
    for (const Element& z : sup.step) cand.push_back(g.multiply(x, z));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  return cand;
}

SparseVec sparse_fill(const std::vector<Element>& cand, const SparseVec& in,
                      const SparseSupport& sup, const GroupSpec& g,
                      bool parallel) {
  SparseVec out(cand.size());
  const std::int64_t n = static_cast<std::int64_t>(cand.size());
#pragma omp parallel for schedule(static) num_threads(g_threads.load()) \
    if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    const Element& y = cand[static_cast<std::size_t>(i)];
    double acc = 0.0;
    for (std::size_t k = 0; k < sup.step.size(); ++k)
      acc += sup.rate[k] * sparse_at(in, g.multiply(y, sup.step_inv[k]));
    out[static_cast<std::size_t>(i)] = {y, acc};
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

void dp_step_impl(const std::vector<double>& in, std::size_t n_states,
                  std::size_t src_counts,
                  const std::vector<std::uint32_t>& left_gather,
                  const std::vector<std::uint8_t>& trigger,
                  const std::vector<double>& rate, std::vector<double>& out,
                  bool parallel) {
  const std::size_t dst_counts = src_counts + 1;
  out.assign(n_states * dst_counts, 0.0);
  const std::int64_t ns = static_cast<std::int64_t>(n_states);
#pragma omp parallel for schedule(static) num_threads(g_threads.load()) \
    if (parallel)
  for (std::int64_t sp = 0; sp < ns; ++sp) {
    const std::size_t s_prime = static_cast<std::size_t>(sp);
    double* dst = &out[s_prime * dst_counts];
    for (std::size_t kp = 0; kp < dst_counts; ++kp) {
      double acc = 0.0;
      for (std::size_t u = 0; u < rate.size(); ++u) {
        const std::size_t s = left_gather[u * n_states + s_prime];
        const std::size_t inc = trigger[u * n_states + s];
        const std::size_t kk = kp - inc;  // wraps when kp < inc
        if (kk < src_counts) acc += rate[u] * in[s * src_counts + kk];
      }
      dst[kp] = acc;
    }
  }
}

void dense_step_impl(const std::vector<double>& in,
                     const std::vector<std::uint32_t>& gather,
                     const std::vector<double>& rate, std::vector<double>& out,
                     bool parallel) {
  const std::size_t n = in.size();
  if (gather.size() != rate.size() * n)
    throw std::invalid_argument("dense_step: gather table size mismatch");
  out.assign(n, 0.0);
  const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) num_threads(g_threads.load()) \
    if (parallel)
  for (std::int64_t xi = 0; xi < ni; ++xi) {
    const std::size_t x = static_cast<std::size_t>(xi);
    double acc = 0.0;
    for (std::size_t k = 0; k < rate.size(); ++k)
      acc += rate[k] * in[gather[k * n + x]];
    out[x] = acc;
  }
}

}  // namespace

void set_num_threads(int n) {
  if (n < 1) throw std::invalid_argument("set_num_threads: n >= 1");
  g_threads.store(n);
}

int num_threads() { return g_threads.load(); }

void dense_step_serial(const std::vector<double>& in,
                       const std::vector<std::uint32_t>& gather,
                       const std::vector<double>& rate,
                       std::vector<double>& out) {
  dense_step_impl(in, gather, rate, out, false);
}

void dense_step_parallel(const std::vector<double>& in,
                         const std::vector<std::uint32_t>& gather,
                         const std::vector<double>& rate,
                         std::vector<double>& out) {
  dense_step_impl(in, gather, rate, out, true);
}

void dense_step_auto(const std::vector<double>& in,
                     const std::vector<std::uint32_t>& gather,
                     const std::vector<double>& rate,
                     std::vector<double>& out) {
  dense_step_impl(in, gather, rate, out, num_threads() > 1);
}

SparseVec sparse_step_serial(const SparseVec& in, const SparseSupport& sup,
                             const GroupSpec& g) {
  return sparse_fill(sparse_candidates(in, sup, g), in, sup, g, false);
}

SparseVec sparse_step_parallel(const SparseVec& in, const SparseSupport& sup,
                               const GroupSpec& g) {
  return sparse_fill(sparse_candidates(in, sup, g), in, sup, g, true);
}

SparseVec sparse_step_auto(const SparseVec& in, const SparseSupport& sup,
                           const GroupSpec& g) {
  return sparse_fill(sparse_candidates(in, sup, g), in, sup, g,
                     num_threads() > 1);
}

void dp_step_serial(const std::vector<double>& in, std::size_t n_states,
                    std::size_t src_counts,
                    const std::vector<std::uint32_t>& left_gather,
                    const std::vector<std::uint8_t>& trigger,
                    const std::vector<double>& rate,
                    std::vector<double>& out) {
  dp_step_impl(in, n_states, src_counts, left_gather, trigger, rate, out,
               false);
}

void dp_step_parallel(const std::vector<double>& in, std::size_t n_states,
                      std::size_t src_counts,
                      const std::vector<std::uint32_t>& left_gather,
                      const std::vector<std::uint8_t>& trigger,
                      const std::vector<double>& rate,
                      std::vector<double>& out) {
  dp_step_impl(in, n_states, src_counts, left_gather, trigger, rate, out, true);
}

void dp_step_auto(const std::vector<double>& in, std::size_t n_states,
                  std::size_t src_counts,
                  const std::vector<std::uint32_t>& left_gather,
                  const std::vector<std::uint8_t>& trigger,
                  const std::vector<double>& rate, std::vector<double>& out) {
  dp_step_impl(in, n_states, src_counts, left_gather, trigger, rate, out,
               num_threads() > 1);
}

}  // namespace cirw::kernels
