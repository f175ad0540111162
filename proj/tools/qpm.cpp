// qpm: run the quadratic projection pipeline from a JSON config.
//
//   qpm run <config.json>
//   qpm sweep <config.json>
//   qpm bands --amplitude A --n-bands K --modes M
//
// QPM_OUTPUT_DIR, when set, overrides outputs.directory of the config.
// Exit codes: 0 success, 2 config error, 3 solver error, 1 anything else.

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "qpm/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitOther = 1;

void print_summary(const qpm::RunResult& r) {
  std::printf("basis size %zu, %zu spectrum points, %zu enclosures\n", r.basis_size,
              r.points.size(), r.enclosures.size());
  for (std::size_t i = 0; i < r.enclosures.size(); ++i) {
    const auto& e = r.enclosures[i];
    const auto& f = r.refined[i];
    std::printf("  gap %d  %.8f +- %.3e", e.gap_index.value_or(-1), e.center, e.half_width);
    if (f.refined) std::printf("  (refined +- %.3e)", f.half_width);
    std::printf("\n");
  }
  if (r.pollution) {
    std::printf("%zu spurious Galerkin candidates\n", r.pollution->spurious_candidates.size());
    for (const auto& c : r.pollution->spurious_candidates) {
      std::printf("  s=%g  %.6f (gap %d, drift %.3e)\n", c.half_width, c.value, c.gap_index, c.drift);
    }
  }
  for (const auto& path : r.written) std::printf("wrote %s\n", path.c_str());
  for (const auto& t : r.timings) std::fprintf(stderr, "%-10s %8.3f s\n", t.stage.c_str(), t.seconds);
}

int run_pipeline(const std::string& config_path, bool sweep) {
  qpm::RunConfig config = qpm::load_run_config(config_path);
  if (const char* dir = std::getenv("QPM_OUTPUT_DIR"); dir && *dir) {
    config.outputs.directory = dir;
  }
  const auto result = sweep ? qpm::run_sweep(config) : qpm::run(config);
  print_summary(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pollution-free eigenvalue enclosures in spectral gaps"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run the pipeline and write all outputs");
  run_cmd->add_option("config", config_path, "JSON run configuration")->required();

  std::string sweep_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the pipeline with the Galerkin pollution sweep");
  sweep_cmd->add_option("config", sweep_path, "JSON run configuration")->required();

  double amplitude = 1.0;
  int n_bands = 5;
  int modes = 32;
  auto* bands_cmd = app.add_subcommand("bands", "Print Mathieu band edges as JSON");
  bands_cmd->add_option("--amplitude", amplitude, "Amplitude of cos(x)")->required();
  bands_cmd->add_option("--n-bands", n_bands, "Number of bands")->required();
  bands_cmd->add_option("--modes", modes, "Fourier truncation |k| <= M")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return run_pipeline(config_path, false);
    if (*sweep_cmd) return run_pipeline(sweep_path, true);
    if (*bands_cmd) {
      std::cout << qpm::bands_json(qpm::mathieu_band_edges(amplitude, n_bands, modes));
      return 0;
    }
  } catch (const qpm::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case qpm::StageError::Kind::kInput: return kExitConfig;
      case qpm::StageError::Kind::kSolver: return kExitSolver;
      case qpm::StageError::Kind::kIo: return kExitOther;
    }
  } catch (const qpm::InvalidInput& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qpm::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
