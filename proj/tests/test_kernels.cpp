#include "doctest.h"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "cirw/kernels.hpp"

using namespace cirw;

namespace {

struct ThreadGuard {
  int saved = kernels::num_threads();
  ~ThreadGuard() { kernels::set_num_threads(saved); }
};

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("worker count is validated and sticky") {
  ThreadGuard guard;
  kernels::set_num_threads(4);
  CHECK(kernels::num_threads() == 4);
  CHECK_THROWS_AS(kernels::set_num_threads(0), std::invalid_argument);
  CHECK_THROWS_AS(kernels::set_num_threads(-3), std::invalid_argument);
  CHECK(kernels::num_threads() == 4);
}

TEST_CASE("dense step matches a hand-rolled gather") {
  // n = 3 states, 2 terms: out[x] = r0*in[g0[x]] + r1*in[g1[x]]
  const std::vector<double> in{1.0, 2.0, 4.0};
  const std::vector<std::uint32_t> gather{1, 2, 0, 2, 0, 1};
  const std::vector<double> rate{0.25, 0.75};
  std::vector<double> out;
  kernels::dense_step_serial(in, gather, rate, out);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == 0.25 * 2.0 + 0.75 * 4.0);
  CHECK(out[1] == 0.25 * 4.0 + 0.75 * 1.0);
  CHECK(out[2] == 0.25 * 1.0 + 0.75 * 2.0);
}

TEST_CASE("dense step is bitwise identical across worker counts") {
  ThreadGuard guard;
  std::mt19937_64 rng(7);
  const std::size_t n = 1537;
  const std::size_t k = 5;
  const auto in = random_vec(n, rng);
  const auto rate = random_vec(k, rng);
  std::vector<std::uint32_t> gather(k * n);
  for (auto& i : gather) i = static_cast<std::uint32_t>(rng() % n);

  std::vector<double> serial, parallel;
  kernels::dense_step_serial(in, gather, rate, serial);
  for (int workers : {2, 3, 8}) {
    kernels::set_num_threads(workers);
    kernels::dense_step_parallel(in, gather, rate, parallel);
    CHECK(parallel == serial);
    kernels::dense_step_auto(in, gather, rate, parallel);
    CHECK(parallel == serial);
  }
}

TEST_CASE("sparse step equals the dense step on an embedded finite group") {
  ThreadGuard guard;
  const auto g = GroupSpec::lattice({16});
  const GroupIndex idx = enumerate_group(g);
  std::mt19937_64 rng(11);
  const auto weights = random_vec(idx.size(), rng);

  kernels::SparseSupport sup;
  sup.step = {Element{1}, Element{15}, Element{4}};
  sup.rate = {0.5, 0.3, 0.2};
  for (const auto& z : sup.step) sup.step_inv.push_back(g.inverse(z));

  kernels::SparseVec in;
  for (std::size_t i = 0; i < idx.size(); ++i)
    in.emplace_back(idx.elements[i], weights[i]);

  std::vector<std::uint32_t> gather;
  for (std::size_t k = 0; k < sup.step.size(); ++k)
    for (std::size_t x = 0; x < idx.size(); ++x)
      gather.push_back(idx.at(g.multiply(idx.elements[x], sup.step_inv[k])));
  std::vector<double> dense_out;
  kernels::dense_step_serial(weights, gather, sup.rate, dense_out);

  const auto sparse_serial = kernels::sparse_step_serial(in, sup, g);
  REQUIRE(sparse_serial.size() == idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    CHECK(sparse_serial[i].first == idx.elements[i]);
    CHECK(sparse_serial[i].second ==
          doctest::Approx(dense_out[i]).epsilon(1e-15));
  }

  kernels::set_num_threads(4);
  const auto sparse_parallel = kernels::sparse_step_parallel(in, sup, g);
  CHECK(sparse_parallel == sparse_serial);
  CHECK(kernels::sparse_step_auto(in, sup, g) == sparse_serial);
}

TEST_CASE("sparse step grows the support and prunes exact zeros") {
  const auto g = GroupSpec::lattice({0});
  kernels::SparseSupport sup;
  sup.step = {Element{1}, Element{-1}};
  sup.step_inv = {Element{-1}, Element{1}};
  sup.rate = {0.5, 0.5};
  kernels::SparseVec in{{Element{0}, 1.0}};
  const auto out = kernels::sparse_step_serial(in, sup, g);
  REQUIRE(out.size() == 2);
  CHECK(out[0].first == Element{-1});
  CHECK(out[0].second == 0.5);
  CHECK(out[1].first == Element{1});
  CHECK(out[1].second == 0.5);
}

namespace {

// Reference for the joint (state, count) recursion, straight from its
// definition: out[s'][k'] = sum_u rate[u] * in[lg(u,s')][k' - trig(u,lg)].
std::vector<double> dp_reference(const std::vector<double>& in,
                                 std::size_t n_states, std::size_t src_counts,
                                 const std::vector<std::uint32_t>& lg,
                                 const std::vector<std::uint8_t>& trig,
                                 const std::vector<double>& rate) {
  const std::size_t dst = src_counts + 1;
  std::vector<double> out(n_states * dst, 0.0);
  for (std::size_t u = 0; u < rate.size(); ++u)
    for (std::size_t sp = 0; sp < n_states; ++sp) {
      const std::size_t s = lg[u * n_states + sp];
      const std::size_t shift = trig[u * n_states + s];
      for (std::size_t k = 0; k < src_counts; ++k)
        out[sp * dst + k + shift] += rate[u] * in[s * src_counts + k];
    }
  return out;
}

}  // namespace

TEST_CASE("dp step matches its definition and is order-insensitive") {
  ThreadGuard guard;
  std::mt19937_64 rng(23);
  const std::size_t n_states = 37;
  const std::size_t src_counts = 4;
  const std::size_t terms = 3;
  const auto in = random_vec(n_states * src_counts, rng);
  const auto rate = random_vec(terms, rng);
  std::vector<std::uint32_t> lg(terms * n_states);
  std::vector<std::uint8_t> trig(terms * n_states);
  for (auto& i : lg) i = static_cast<std::uint32_t>(rng() % n_states);
  for (auto& b : trig) b = static_cast<std::uint8_t>(rng() % 2);

  const auto expect = dp_reference(in, n_states, src_counts, lg, trig, rate);

  std::vector<double> serial, parallel;
  kernels::dp_step_serial(in, n_states, src_counts, lg, trig, rate, serial);
  REQUIRE(serial.size() == expect.size());
  for (std::size_t i = 0; i < serial.size(); ++i)
    CHECK(serial[i] == doctest::Approx(expect[i]).epsilon(1e-14));

  for (int workers : {2, 5}) {
    kernels::set_num_threads(workers);
    kernels::dp_step_parallel(in, n_states, src_counts, lg, trig, rate,
                              parallel);
    CHECK(parallel == serial);
    kernels::dp_step_auto(in, n_states, src_counts, lg, trig, rate, parallel);
    CHECK(parallel == serial);
  }
}
