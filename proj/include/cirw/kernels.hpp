#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cirw/group.hpp"

namespace cirw::kernels {

/// Worker count used by the *_auto dispatchers (1 = serial).  Thread-safe.
void set_num_threads(int n);
int num_threads();

/// One convolution step on a dense finite-group vector:
///   out[x] = sum_k rate[k] * in[gather[k*n + x]]
/// where gather holds precomputed product indices (n = |group|).  The k-sum
/// runs in fixed order per output, so serial and parallel variants agree
/// bit-for-bit.
void dense_step_serial(const std::vector<double>& in,
                       const std::vector<std::uint32_t>& gather,
                       const std::vector<double>& rate,
                       std::vector<double>& out);
void dense_step_parallel(const std::vector<double>& in,
                         const std::vector<std::uint32_t>& gather,
                         const std::vector<double>& rate,
                         std::vector<double>& out);
void dense_step_auto(const std::vector<double>& in,
                     const std::vector<std::uint32_t>& gather,
                     const std::vector<double>& rate,
                     std::vector<double>& out);

/// Support of a sparse convolution step, with precomputed inverses.
struct SparseSupport {
  std::vector<Element> step;
  std::vector<Element> step_inv;
  std::vector<double> rate;
};

using SparseVec = std::vector<std::pair<Element, double>>;  // sorted unique

/// One convolution step on a sorted sparse vector:
///   out(y) = sum_k rate[k] * in(y * step_inv[k]),
/// over the candidate set {x * step[k]}.  Exact zeros are pruned.
SparseVec sparse_step_serial(const SparseVec& in, const SparseSupport& sup,
                             const GroupSpec& g);
SparseVec sparse_step_parallel(const SparseVec& in, const SparseSupport& sup,
                               const GroupSpec& g);
SparseVec sparse_step_auto(const SparseVec& in, const SparseSupport& sup,
                           const GroupSpec& g);

/// One prepend step of the joint (value, match-count) table on a finite
/// group.  Layout: row-major tables[state][count], src_counts columns in,
/// src_counts + 1 columns out.
///   out[s'][k'] = sum_u rate[u] * in[lg(u,s')][k' - trig(u, lg(u,s'))]
/// with lg(u,s') = index(step[u]^{-1} s') and trig(u,s) in {0,1}.
void dp_step_serial(const std::vector<double>& in, std::size_t n_states,
                    std::size_t src_counts,
                    const std::vector<std::uint32_t>& left_gather,
                    const std::vector<std::uint8_t>& trigger,
                    const std::vector<double>& rate, std::vector<double>& out);
void dp_step_parallel(const std::vector<double>& in, std::size_t n_states,
                      std::size_t src_counts,
                      const std::vector<std::uint32_t>& left_gather,
                      const std::vector<std::uint8_t>& trigger,
                      const std::vector<double>& rate,
                      std::vector<double>& out);
void dp_step_auto(const std::vector<double>& in, std::size_t n_states,
                  std::size_t src_counts,
                  const std::vector<std::uint32_t>& left_gather,
                  const std::vector<std::uint8_t>& trigger,
                  const std::vector<double>& rate, std::vector<double>& out);

}  // namespace cirw::kernels
