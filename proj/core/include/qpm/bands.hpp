#pragma once

// Essential spectrum of the periodic background operator as a sorted list of
// disjoint bands, and the gaps between them.

#include <limits>
#include <optional>
#include <vector>

namespace qpm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0;
  double hi = 0.0;  // may be +infinity for the last band

  bool right_infinite() const noexcept { return hi == kInfinity; }
  double width() const noexcept { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// An open gap of the essential spectrum. Index 0 is the half-line below the
/// first band; index k >= 1 lies between band k and band k + 1 (1-based bands).
struct Gap {
  int index = 0;
  double lo = -kInfinity;
  double hi = 0.0;

  bool contains(double x) const noexcept { return lo < x && x < hi; }
  bool contains(double a, double b) const noexcept { return lo < a && b < hi; }
};

class BandStructure {
 public:
  /// Bands whose gaps are at most `touch_tolerance` wide are merged. When
  /// `resolved_top` is set, the spectrum above it is unknown; otherwise the
  /// listed bands are the whole spectrum. Throws InvalidInput on lo > hi or
  /// unsorted input.
  static BandStructure from_bands(std::vector<Interval> bands,
                                  std::optional<double> resolved_top = std::nullopt,
                                  double touch_tolerance = 1e-10);

  const std::vector<Interval>& bands() const noexcept { return bands_; }
  std::optional<double> resolved_top() const noexcept { return resolved_top_; }
  bool right_infinite() const noexcept {
    return !bands_.empty() && bands_.back().right_infinite();
  }

  /// All gaps below the resolved range: the lower half-line plus every
  /// finite gap between consecutive bands.
  std::vector<Gap> gaps() const;

  /// Distance from x to the nearest band (0 inside a band).
  double distance_to_bands(double x) const;

 private:
  std::vector<Interval> bands_;
  std::optional<double> resolved_top_;
};

/// Bands of -u'' + amplitude cos(x) u from the Fourier-truncated periodic
/// (integer modes) and antiperiodic (half-integer modes) Hill matrices with
/// |k| <= modes. Requires modes >= 4 n_bands.
BandStructure mathieu_band_edges(double amplitude, int n_bands, int modes);

/// The 2(n_bands) sorted edge values before bands are formed or merged.
std::vector<double> mathieu_edge_values(double amplitude, int n_bands, int modes);

/// Minkowski sum {l + m}. For inputs with a resolved top the result is
/// clipped at the resolution limit; the band reaching the limit is extended
/// to +infinity when it is wider than every gap of either input.
BandStructure sum_bands(const BandStructure& b1, const BandStructure& b2);

/// Every edge moved by t (spectrum of the operator plus the constant t).
BandStructure shift_bands(const BandStructure& b, double t);

/// Gaps (whole, unclipped) that meet the window [lo, hi]. The half-line gap
/// below the first band is always included.
std::vector<Gap> gaps(const BandStructure& b, Interval window);

}  // namespace qpm
