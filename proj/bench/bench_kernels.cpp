// OpenMP kernels against their serial reference twins.
//
//   bench_kernels --benchmark_filter=apply_shifted

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>
#include <vector>

#include "hslab/cg.hpp"
#include "hslab/kernels.hpp"

using namespace hslab;

namespace {

struct Data {
  int n;
  std::vector<double> a, b, k, out;
  explicit Data(int n_) : n(n_) {
    const std::size_t N = static_cast<std::size_t>(n) * n;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    a.resize(N);
    b.resize(N);
    k.resize(N);
    out.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
      a[i] = U(rng);
      b[i] = U(rng);
      k[i] = U(rng);
    }
  }
  std::size_t size() const { return a.size(); }
};

// Arguments: n, threads (0 selects the serial reference).
void Args(benchmark::internal::Benchmark* b) {
  for (int n : {257, 513, 1025}) {
    b->Args({n, 0});
    for (int t : {1, 2, 4}) b->Args({n, t});
  }
}

template <class Omp, class Ref>
void run(benchmark::State& state, Omp omp_fn, Ref ref_fn) {
  Data d(static_cast<int>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  if (threads > 0) omp_set_num_threads(threads);
  for (auto _ : state) {
    if (threads > 0) omp_fn(d);
    else ref_fn(d);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(d.size()));
  state.SetLabel(threads > 0 ? "omp" : "reference");
}

void BM_laplacian(benchmark::State& state) {
  run(
      state, [](Data& d) { kernels::laplacian(d.n, 0.01, d.a.data(), d.out.data()); },
      [](Data& d) { kernels::reference::laplacian(d.n, 0.01, d.a.data(), d.out.data()); });
}

void BM_apply_shifted(benchmark::State& state) {
  run(
      state, [](Data& d) { kernels::apply_shifted(d.n, 0.01, d.k.data(), d.a.data(), d.out.data()); },
      [](Data& d) { kernels::reference::apply_shifted(d.n, 0.01, d.k.data(), d.a.data(), d.out.data()); });
}

void BM_interior_dot(benchmark::State& state) {
  run(
      state, [](Data& d) { benchmark::DoNotOptimize(kernels::interior_dot(d.n, d.a.data(), d.b.data())); },
      [](Data& d) { benchmark::DoNotOptimize(kernels::reference::interior_dot(d.n, d.a.data(), d.b.data())); });
}

void BM_axpy(benchmark::State& state) {
  run(
      state, [](Data& d) { kernels::axpy(d.size(), 1e-9, d.a.data(), d.b.data()); },
      [](Data& d) { kernels::reference::axpy(d.size(), 1e-9, d.a.data(), d.b.data()); });
}

// Whole preconditioned CG solve; only the OpenMP path exists here.
void BM_cg_solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  const Grid2D g(0.0, 1.0, n);
  std::vector<double> k(g.size(), 16.0), rhs(g.size(), 1.0), x;
  for (auto _ : state) {
    x.assign(g.size(), 0.0);
    benchmark::DoNotOptimize(solve_shifted_laplacian(g, k, rhs, x, 1e-10, 100000));
  }
}

}  // namespace

BENCHMARK(BM_laplacian)->Apply(Args)->UseRealTime();
BENCHMARK(BM_apply_shifted)->Apply(Args)->UseRealTime();
BENCHMARK(BM_interior_dot)->Apply(Args)->UseRealTime();
BENCHMARK(BM_axpy)->Apply(Args)->UseRealTime();
BENCHMARK(BM_cg_solve)
    ->Args({257, 1})
    ->Args({257, 4})
    ->Args({513, 1})
    ->Args({513, 4})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
