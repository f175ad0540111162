#include <benchmark/benchmark.h>

#include "qpm/bands.hpp"

static void BM_MathieuEdges(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qpm::mathieu_band_edges(1.0, 5, modes));
}
BENCHMARK(BM_MathieuEdges)->Arg(32)->Arg(64)->Arg(128);

static void BM_SumBands(benchmark::State& state) {
  const auto b = qpm::mathieu_band_edges(1.0, 5, 32);
  for (auto _ : state) benchmark::DoNotOptimize(qpm::sum_bands(b, b));
}
BENCHMARK(BM_SumBands);

BENCHMARK_MAIN();
