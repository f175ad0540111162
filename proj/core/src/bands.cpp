#include "qpm/bands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qpm/errors.hpp"

namespace qpm {

namespace {

// Eigenvalues of the symmetric tridiagonal Hill matrix with diagonal k^2 for
// k = first, first + 1, ..., and off-diagonal amplitude / 2.
Eigen::VectorXd hill_eigenvalues(double first, int size, double amplitude) {
  Eigen::VectorXd diag(size), sub(size - 1);
  for (int i = 0; i < size; ++i) {
    const double k = first + i;
    diag[i] = k * k;
  }
  sub.setConstant(0.5 * amplitude);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SolverError("tridiagonal Hill eigensolver did not converge");
  }
  return solver.eigenvalues();
}

double max_finite_gap(const BandStructure& b) {
  double w = 0.0;
  for (const auto& g : b.gaps())
    if (std::isfinite(g.lo)) w = std::max(w, g.hi - g.lo);
  return w;
}

}  // namespace

BandStructure BandStructure::from_bands(std::vector<Interval> bands,
                                        std::optional<double> resolved_top,
                                        double touch_tolerance) {
  for (const auto& b : bands) {
    if (std::isnan(b.lo) || std::isnan(b.hi) || b.lo > b.hi || b.lo == kInfinity) {
      throw InvalidInput("band [" + std::to_string(b.lo) + ", " + std::to_string(b.hi) +
                         "] is not a valid interval");
    }
  }
  for (std::size_t i = 1; i < bands.size(); ++i) {
    if (bands[i].lo < bands[i - 1].lo) throw InvalidInput("bands must be sorted");
  }

  BandStructure out;
  for (const auto& b : bands) {
    if (!out.bands_.empty() && b.lo <= out.bands_.back().hi + touch_tolerance) {
      out.bands_.back().hi = std::max(out.bands_.back().hi, b.hi);
    } else {
      out.bands_.push_back(b);
    }
  }
  if (out.right_infinite()) resolved_top.reset();
  out.resolved_top_ = resolved_top;
  return out;
}

std::vector<Gap> BandStructure::gaps() const {
  std::vector<Gap> out;
  if (bands_.empty()) return out;
  out.push_back({0, -kInfinity, bands_.front().lo});
  for (std::size_t k = 1; k < bands_.size(); ++k) {
    out.push_back({static_cast<int>(k), bands_[k - 1].hi, bands_[k].lo});
  }
  return out;
}

double BandStructure::distance_to_bands(double x) const {
  double d = kInfinity;
  for (const auto& b : bands_) {
    if (x >= b.lo && x <= b.hi) return 0.0;
    d = std::min(d, x < b.lo ? b.lo - x : x - b.hi);
  }
  return d;
}

std::vector<double> mathieu_edge_values(double amplitude, int n_bands, int modes) {
  if (n_bands < 1) throw InvalidInput("n_bands must be positive");
  if (modes < 4 * n_bands) {
    throw InvalidInput("Fourier truncation too small: modes=" + std::to_string(modes) +
                       " < 4*n_bands=" + std::to_string(4 * n_bands));
  }
  if (!std::isfinite(amplitude)) throw InvalidInput("amplitude must be finite");

  const Eigen::VectorXd periodic = hill_eigenvalues(-modes, 2 * modes + 1, amplitude);
  const Eigen::VectorXd antiperiodic = hill_eigenvalues(-modes + 0.5, 2 * modes, amplitude);
  std::vector<double> edges(periodic.data(), periodic.data() + periodic.size());
  edges.insert(edges.end(), antiperiodic.data(), antiperiodic.data() + antiperiodic.size());
  std::sort(edges.begin(), edges.end());

  const auto needed = static_cast<std::size_t>(2 * n_bands);
  // Only the lower part of each truncated spectrum is resolved.
  if (needed > static_cast<std::size_t>(modes)) {
    throw InvalidInput("requested bands beyond the resolved range");
  }
  edges.resize(needed);
  return edges;
}

BandStructure mathieu_band_edges(double amplitude, int n_bands, int modes) {
  const auto edges = mathieu_edge_values(amplitude, n_bands, modes);
  std::vector<Interval> bands;
  for (std::size_t i = 0; i + 1 < edges.size(); i += 2) bands.push_back({edges[i], edges[i + 1]});
  const double top = bands.back().hi;
  return BandStructure::from_bands(std::move(bands), top);
}

BandStructure sum_bands(const BandStructure& b1, const BandStructure& b2) {
  if (b1.bands().empty() || b2.bands().empty()) return BandStructure::from_bands({});

  std::vector<Interval> sums;
  for (const auto& x : b1.bands())
    for (const auto& y : b2.bands()) sums.push_back({x.lo + y.lo, x.hi + y.hi});
  std::sort(sums.begin(), sums.end(),
            [](const Interval& l, const Interval& r) { return l.lo < r.lo; });

  std::optional<double> limit;
  auto tighten = [&](const BandStructure& a, const BandStructure& b) {
    if (a.resolved_top()) {
      const double l = *a.resolved_top() + b.bands().front().lo;
      limit = limit ? std::min(*limit, l) : l;
    }
  };
  tighten(b1, b2);
  tighten(b2, b1);

  BandStructure merged = BandStructure::from_bands(std::move(sums), std::nullopt, 0.0);
  if (!limit) return merged;

  std::vector<Interval> clipped;
  for (auto band : merged.bands()) {
    if (band.lo >= *limit) break;
    band.hi = std::min(band.hi, *limit);
    clipped.push_back(band);
  }
  if (!clipped.empty() && clipped.back().hi >= *limit) {
    const double widest_gap = std::max(max_finite_gap(b1), max_finite_gap(b2));
    if (clipped.back().width() > widest_gap) {
      clipped.back().hi = kInfinity;
      return BandStructure::from_bands(std::move(clipped), std::nullopt, 0.0);
    }
  }
  return BandStructure::from_bands(std::move(clipped), *limit, 0.0);
}

BandStructure shift_bands(const BandStructure& b, double t) {
  std::vector<Interval> moved;
  for (const auto& band : b.bands()) moved.push_back({band.lo + t, band.hi + t});
  std::optional<double> top;
  if (b.resolved_top()) top = *b.resolved_top() + t;
  return BandStructure::from_bands(std::move(moved), top, 0.0);
}

std::vector<Gap> gaps(const BandStructure& b, Interval window) {
  std::vector<Gap> out;
  for (const auto& g : b.gaps()) {
    if (g.index == 0 || (g.hi > window.lo && g.lo < window.hi)) out.push_back(g);
  }
  return out;
}

}  // namespace qpm
