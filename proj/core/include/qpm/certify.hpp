#pragma once

// Certified enclosures from second-order spectrum points, and the Galerkin
// pollution comparison.
//
// Every mu in Spec(P) gives an interval [Re mu - |Im mu|, Re mu + |Im mu|]
// that meets Spec(H) whenever the trial space lies in Dom(H). If the
// interval sits inside a gap of the essential spectrum, the point it meets is
// a discrete eigenvalue in that gap.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpm/bands.hpp"
#include "qpm/fem.hpp"
#include "qpm/matpoly.hpp"
#include "qpm/potentials.hpp"

namespace qpm {

struct Enclosure {
  double center = 0.0;
  double half_width = 0.0;
  SpectrumPoint source;
  std::optional<int> gap_index;
  bool refined = false;

  double lo() const noexcept { return center - half_width; }
  double hi() const noexcept { return center + half_width; }
  bool contains(double x) const noexcept { return lo() <= x && x <= hi(); }
};

Enclosure enclose(const SpectrumPoint& mu);

struct RefineOutcome {
  Enclosure enclosure;
  std::optional<std::string> diagnostic;  // set when refinement was refused
};

/// Quadratic tightening to 2 (Im mu)^2 / delta. `delta` must be a verified
/// lower bound on the distance from the enclosed eigenvalue to the rest of
/// the spectrum. Refused unless the full est1 width 2|Im mu| is below
/// delta / 2, which bounds |mu - lambda| < delta / 2 for every lambda in the
/// interval.
RefineOutcome refine(const Enclosure& e, double delta);

/// Safety factor applied to the measured isolation distance.
inline constexpr double kIsolationSafety = 0.9;

/// refine() with delta = 0.9 * distance from the est1 interval to the nearest
/// band or other enclosure.
RefineOutcome refine_isolated(const Enclosure& e, const BandStructure& bands,
                              std::span<const Enclosure> others);

/// Keeps points with |Im mu| <= im_cutoff whose est1 interval lies strictly
/// inside a gap, merges overlapping intervals in one gap (smallest half width
/// wins) and tags the gap. Output is sorted by center.
std::vector<Enclosure> classify(std::span<const SpectrumPoint> points,
                                const BandStructure& bands, double im_cutoff);

inline constexpr double kSpuriousMargin = 0.02;

struct SweepEntry {
  double half_width = 0.0;  // s
  std::vector<double> eigenvalues;
};

struct SpuriousCandidate {
  double half_width = 0.0;  // s at which it was seen
  double value = 0.0;
  int gap_index = 0;
  double drift = 0.0;  // worst distance to the nearest same-gap value at the other s
};

struct CertifiedTrack {
  double center = 0.0;
  double drift = 0.0;  // max - min of the nearest Galerkin value across s
};

/// Flagging here is a heuristic report, not a certificate.
struct PollutionReport {
  std::vector<SweepEntry> sweep;
  std::vector<Enclosure> certified;
  std::vector<SpuriousCandidate> spurious_candidates;
  std::vector<CertifiedTrack> certified_tracks;
};

/// Galerkin eigenvalues in a finite gap and outside every certified
/// enclosure inflated by `margin` are flagged. The template's mesh width is
/// kept fixed while s varies. Requires at least three sweep values.
PollutionReport pollution_report(std::span<const double> sweep_values,
                                 const DiscretizationSpec& spec_template,
                                 const PotentialSpec& pot, const BandStructure& bands,
                                 std::span<const Enclosure> certified,
                                 double margin = kSpuriousMargin);

/// The same analysis for precomputed Galerkin spectra.
PollutionReport analyze_sweep(std::vector<SweepEntry> sweep, const BandStructure& bands,
                              std::span<const Enclosure> certified,
                              double margin = kSpuriousMargin);

/// Mesh of the template scaled to half width s at the same element size.
DiscretizationSpec rescale_to(const DiscretizationSpec& spec_template, double s);

}  // namespace qpm
