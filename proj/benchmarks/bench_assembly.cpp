#include <benchmark/benchmark.h>

#include "qpm/fem.hpp"

static void BM_Assemble1D(benchmark::State& state) {
  const auto spec = qpm::DiscretizationSpec::one_d(49.0, static_cast<int>(state.range(0)));
  const auto pot = qpm::builtin(qpm::BuiltinPotential::kMathieuGaussian);
  for (auto _ : state) benchmark::DoNotOptimize(qpm::assemble(spec, pot));
  state.counters["n"] = static_cast<double>(spec.basis_size());
}
BENCHMARK(BM_Assemble1D)->Arg(196)->Arg(392)->Arg(784)->Unit(benchmark::kMillisecond);

static void BM_Assemble2D(benchmark::State& state) {
  const auto spec = qpm::DiscretizationSpec::two_d(15.0, static_cast<int>(state.range(0)));
  const auto pot = qpm::builtin(qpm::BuiltinPotential::kH1, 6.2);
  for (auto _ : state) benchmark::DoNotOptimize(qpm::assemble(spec, pot));
  state.counters["n"] = static_cast<double>(spec.basis_size());
}
BENCHMARK(BM_Assemble2D)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
