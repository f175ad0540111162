#pragma once

// Configuration-driven pipeline: bands -> assemble -> pencil -> spectrum ->
// classify -> refine -> optional pollution sweep -> output files.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpm/bands.hpp"
#include "qpm/certify.hpp"
#include "qpm/errors.hpp"
#include "qpm/fem.hpp"
#include "qpm/matpoly.hpp"
#include "qpm/potentials.hpp"

namespace qpm {

inline constexpr std::string_view kRunConfigSchema = "qpm.run/1";

struct ComplexWindow {
  double re_lo = -0.5;
  double re_hi = 2.0;
  double im_lo = -0.25;
  double im_hi = 0.25;

  bool contains(Complex z) const noexcept {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
  }
};

struct OutputPaths {
  std::filesystem::path directory = ".";
  std::string points = "points.csv";
  std::string enclosures = "enclosures.json";
  std::string bands = "bands.json";
  std::string scatter = "scatter.svg";
  std::string report = "report.json";
};

struct RunConfig {
  std::optional<BuiltinPotential> builtin_name;  // set when the potential came from the catalog
  PotentialSpec potential;
  DiscretizationSpec discretization;
  CompanionVariant companion = CompanionVariant::kForm1;
  bool mass_scaled_companion = false;  // N = B instead of N = I
  double im_cutoff = 0.05;
  int n_bands = 5;
  int fourier_modes = 32;
  std::vector<double> sweep;  // s values for the pollution report; empty = none
  ComplexWindow window;
  bool compute_residuals = true;
  OutputPaths outputs;

  /// Throws InvalidInput naming the first offending field.
  void validate() const;
};

/// Parses the versioned JSON config. Missing optional fields take the
/// dimension-dependent defaults (im_cutoff 0.05 / 0.15, scatter window
/// [-0.5, 2] x [-0.25, 0.25] / [-1, 0.5] x [-1.5, 1.5]).
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical JSON of a config (sorted keys, fixed number formatting).
std::string canonical_json(const RunConfig& config);

/// FNV-1a 64 of canonical_json, rendered as 16 hex digits.
std::string config_digest(const RunConfig& config);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunResult {
  BandStructure bands;
  std::size_t basis_size = 0;
  double asymmetry_defect = 0.0;
  std::vector<SpectrumPoint> points;
  std::vector<Enclosure> enclosures;  // est1
  std::vector<Enclosure> refined;     // est2 where isolation allowed it, else est1
  std::vector<std::string> refine_diagnostics;
  std::optional<PollutionReport> pollution;
  std::vector<StageTiming> timings;
  std::vector<std::filesystem::path> written;
};

/// A stage failure. `what()` carries the stage name and config digest.
class StageError : public Error {
 public:
  enum class Kind { kInput, kSolver, kIo };
  StageError(Kind kind, std::string stage, const std::string& message)
      : Error(message), kind_(kind), stage_(std::move(stage)) {}
  Kind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  Kind kind_;
  std::string stage_;
};

/// The band structure implied by the periodic part of the potential.
BandStructure background_bands(const PotentialSpec& pot, int n_bands, int fourier_modes);

/// Runs every stage in memory without touching the filesystem.
RunResult compute(const RunConfig& config, bool with_sweep);

/// compute() followed by writing all outputs atomically: each file goes to a
/// temporary first, and nothing is renamed into place unless every file was
/// written.
RunResult run(const RunConfig& config);

/// Same as run() but the pollution sweep is mandatory.
RunResult run_sweep(const RunConfig& config);

// Output formats. Numbers carry 12 significant digits.
std::string points_csv(const std::vector<SpectrumPoint>& points);
std::string enclosures_json(const std::vector<Enclosure>& enclosures,
                            const std::vector<Enclosure>& refined);
std::string bands_json(const BandStructure& bands);
std::string report_json(const RunConfig& config, const RunResult& result);

struct EnclosureFile {
  std::vector<Enclosure> enclosures;
  std::vector<Enclosure> refined;
};
EnclosureFile parse_enclosures_json(std::string_view text);

/// Fixed 900x450 SVG: spectrum points inside the window, real-axis band
/// segments and enclosure ticks. Deterministic for identical input.
std::string render_scatter(const std::vector<SpectrumPoint>& points, const BandStructure& bands,
                           const std::vector<Enclosure>& enclosures, const ComplexWindow& window);

/// Rounds to 12 significant digits, the precision of every emitted number.
double round_sig12(double v);

}  // namespace qpm
