#include <benchmark/benchmark.h>

#include "qpm/fem.hpp"
#include "qpm/matpoly.hpp"

namespace {

qpm::QuadraticPencil pencil(int m) {
  const auto mats = qpm::assemble(qpm::DiscretizationSpec::one_d(49.0, m),
                                  qpm::builtin(qpm::BuiltinPotential::kMathieuGaussian));
  return qpm::make_pencil(mats.bending, mats.stiffness, mats.mass);
}

}  // namespace

// range(1) toggles eigenvector residuals.
static void BM_PencilSpectrum(benchmark::State& state) {
  const auto p = pencil(static_cast<int>(state.range(0)));
  const qpm::SpectrumOptions options{.compute_residuals = state.range(1) != 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(qpm::pencil_spectrum(p, qpm::CompanionForm::identity(), options));
  }
  state.counters["n"] = static_cast<double>(p.size());
}
BENCHMARK(BM_PencilSpectrum)
    ->Args({49, 0})
    ->Args({98, 0})
    ->Args({196, 0})
    ->Args({196, 1})
    ->Unit(benchmark::kMillisecond);

static void BM_GalerkinSpectrum(benchmark::State& state) {
  const auto p = pencil(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qpm::galerkin_spectrum(p.stiffness(), p.mass()));
}
BENCHMARK(BM_GalerkinSpectrum)->Arg(196)->Arg(392)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
