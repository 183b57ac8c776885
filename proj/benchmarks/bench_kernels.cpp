// Serial vs parallel convolution kernels at realistic sizes, plus one
// end-to-end heat-kernel comparison.  Run with --benchmark_filter=... to
// narrow.
#include <benchmark/benchmark.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "cirw/group.hpp"
#include "cirw/heat_kernel.hpp"
#include "cirw/kernels.hpp"
#include "cirw/rate_measure.hpp"

namespace {

using namespace cirw;

int worker_count() {
  return std::max(2, static_cast<int>(std::thread::hardware_concurrency()));
}

struct DenseCase {
  std::vector<double> in;
  std::vector<std::uint32_t> gather;
  std::vector<double> rate;
  std::vector<double> out;
};

/// Dense vector over a synthetic group table: n states, k jump directions,
/// gather indices drawn uniformly (the access pattern of a product table).
DenseCase make_dense_case(std::size_t n, std::size_t k) {
  DenseCase c;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::uniform_int_distribution<std::uint32_t> index(
      0, static_cast<std::uint32_t>(n - 1));
  c.in.resize(n);
  for (double& v : c.in) v = weight(rng);
  c.gather.resize(n * k);
  for (std::uint32_t& v : c.gather) v = index(rng);
  c.rate.resize(k);
  for (double& v : c.rate) v = weight(rng) / static_cast<double>(k);
  c.out.resize(n);
  return c;
}

void bench_dense(benchmark::State& state, bool parallel) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  DenseCase c = make_dense_case(n, k);
  kernels::set_num_threads(parallel ? worker_count() : 1);
  for (auto _ : state) {
    kernels::dense_step_auto(c.in, c.gather, c.rate, c.out);
    benchmark::DoNotOptimize(c.out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n * k));
}

void dense_serial(benchmark::State& state) { bench_dense(state, false); }
void dense_parallel(benchmark::State& state) { bench_dense(state, true); }

struct SparseCase {
  GroupSpec group = GroupSpec::lattice({0, 0});
  kernels::SparseVec in;
  kernels::SparseSupport sup;
};

/// Sparse planar walk state after `steps` growth rounds: the support is the
/// diamond |x| + |y| <= steps.
SparseCase make_sparse_case(int steps) {
  SparseCase c;
  const std::vector<Element> dirs = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const Element& z : dirs) {
    c.sup.step.push_back(z);
    c.sup.step_inv.push_back(c.group.inverse(z));
    c.sup.rate.push_back(0.25);
  }
  c.in = {{c.group.identity(), 1.0}};
  for (int i = 0; i < steps; ++i) {
    c.in = kernels::sparse_step_serial(c.in, c.sup, c.group);
  }
  return c;
}

void bench_sparse(benchmark::State& state, bool parallel) {
  SparseCase c = make_sparse_case(static_cast<int>(state.range(0)));
  kernels::set_num_threads(parallel ? worker_count() : 1);
  for (auto _ : state) {
    kernels::SparseVec out = kernels::sparse_step_auto(c.in, c.sup, c.group);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(c.in.size() * 4));
}

void sparse_serial(benchmark::State& state) { bench_sparse(state, false); }
void sparse_parallel(benchmark::State& state) { bench_sparse(state, true); }

struct DpCase {
  std::vector<double> in;
  std::size_t n_states;
  std::size_t src_counts;
  std::vector<std::uint32_t> left_gather;
  std::vector<std::uint8_t> trigger;
  std::vector<double> rate;
  std::vector<double> out;
};

DpCase make_dp_case(std::size_t n_states, std::size_t src_counts,
                    std::size_t k) {
  DpCase c;
  c.n_states = n_states;
  c.src_counts = src_counts;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::uniform_int_distribution<std::uint32_t> index(
      0, static_cast<std::uint32_t>(n_states - 1));
  std::bernoulli_distribution hit(0.05);
  c.in.resize(n_states * src_counts);
  for (double& v : c.in) v = weight(rng);
  c.left_gather.resize(k * n_states);
  for (std::uint32_t& v : c.left_gather) v = index(rng);
  c.trigger.resize(k * n_states);
  for (std::uint8_t& v : c.trigger) v = hit(rng) ? 1 : 0;
  c.rate.resize(k);
  for (double& v : c.rate) v = weight(rng) / static_cast<double>(k);
  c.out.resize(n_states * (src_counts + 1));
  return c;
}

void bench_dp(benchmark::State& state, bool parallel) {
  DpCase c = make_dp_case(static_cast<std::size_t>(state.range(0)),
                          static_cast<std::size_t>(state.range(1)), 16);
  kernels::set_num_threads(parallel ? worker_count() : 1);
  for (auto _ : state) {
    kernels::dp_step_auto(c.in, c.n_states, c.src_counts, c.left_gather,
                          c.trigger, c.rate, c.out);
    benchmark::DoNotOptimize(c.out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(c.n_states * c.src_counts *
                                                    16));
}

void dp_serial(benchmark::State& state) { bench_dp(state, false); }
void dp_parallel(benchmark::State& state) { bench_dp(state, true); }

void heat_kernel_cube8(benchmark::State& state) {
  const auto g = GroupSpec::hypercube(8);
  std::vector<std::pair<Element, double>> gens;
  for (int k = 0; k < 8; ++k) {
    Element e(8, 0);
    e[static_cast<std::size_t>(k)] = 1;
    gens.emplace_back(std::move(e), 1.0 / 8.0);
  }
  const RateMeasure mu = RateMeasure::from_generators(g, gens);
  kernels::set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Pmf f = heat_kernel(g, mu, 5.0);
    benchmark::DoNotOptimize(&f);
  }
}

}  // namespace

BENCHMARK(dense_serial)
    ->Args({4096, 16})
    ->Args({20000, 30})
    ->Args({40320, 12});
BENCHMARK(dense_parallel)
    ->Args({4096, 16})
    ->Args({20000, 30})
    ->Args({40320, 12})
    ->MeasureProcessCPUTime()
    ->UseRealTime();

BENCHMARK(sparse_serial)->Arg(60)->Arg(150);
BENCHMARK(sparse_parallel)->Arg(60)->Arg(150)->MeasureProcessCPUTime()
    ->UseRealTime();

BENCHMARK(dp_serial)->Args({4096, 64})->Args({1024, 128});
BENCHMARK(dp_parallel)->Args({4096, 64})->Args({1024, 128})
    ->MeasureProcessCPUTime()->UseRealTime();

BENCHMARK(heat_kernel_cube8)->Arg(1)->Arg(4)->UseRealTime();

BENCHMARK_MAIN();
