// Serial reference vs OpenMP form of each kernel. Run with OMP_NUM_THREADS to pick
// the thread count; arg 0 is serial, arg 1 parallel.

#include "tsd/charfn.hpp"
#include "tsd/kernels.hpp"

#include <benchmark/benchmark.h>

namespace {

using tsd::Exec;

const tsd::TsdParams kParams(1.0, 0.3, 1.0, 1.5, 0.2, 2.0);

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return xs;
}

void BM_cdf_on_grid(benchmark::State& state) {
  const auto law = tsd::make_law(tsd::CharFn::tempered(kParams));
  const auto xs = grid(law.lo(), law.hi(), 256);
  for (auto _ : state) benchmark::DoNotOptimize(tsd::cdf_on_grid(law, xs, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}

void BM_sample_chunked(benchmark::State& state) {
  const std::size_t size = 1 << 17;
  for (auto _ : state)
    benchmark::DoNotOptimize(tsd::sample_tempered_chunked(kParams, size, 42, 0, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(size));
}

void BM_stein_on_grid(benchmark::State& state) {
  const tsd::SteinSolution f(kParams, tsd::make_test_function("tanh"));
  const auto xs = grid(-6.0, 6.0, 64);
  for (auto _ : state) benchmark::DoNotOptimize(tsd::stein_on_grid(f, xs, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}

BENCHMARK(BM_cdf_on_grid)->Arg(0)->Arg(1)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample_chunked)->Arg(0)->Arg(1)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_stein_on_grid)->Arg(0)->Arg(1)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
