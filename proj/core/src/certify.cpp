#include "qpm/certify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpm/errors.hpp"

namespace qpm {

namespace {

double interval_distance(double lo1, double hi1, double lo2, double hi2) {
  if (hi1 < lo2) return lo2 - hi1;
  if (hi2 < lo1) return lo1 - hi2;
  return 0.0;
}

std::optional<Gap> enclosing_gap(const BandStructure& bands, double lo, double hi) {
  for (const auto& g : bands.gaps())
    if (g.contains(lo, hi)) return g;
  return std::nullopt;
}

}  // namespace

Enclosure enclose(const SpectrumPoint& mu) {
  Enclosure e;
  e.center = mu.mu.real();
  e.half_width = std::abs(mu.mu.imag());
  e.source = mu;
  return e;
}

RefineOutcome refine(const Enclosure& e, double delta) {
  const double im = std::abs(e.source.mu.imag());
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    return {e, "isolation distance must be positive, got " + std::to_string(delta)};
  }
  if (!(2.0 * im < 0.5 * delta)) {
    return {e, "est1 width " + std::to_string(2.0 * im) +
                   " is not below delta/2 = " + std::to_string(0.5 * delta)};
  }
  Enclosure out = e;
  out.half_width = std::min(e.half_width, 2.0 * im * im / delta);
  out.refined = true;
  return {out, std::nullopt};
}

RefineOutcome refine_isolated(const Enclosure& e, const BandStructure& bands,
                              std::span<const Enclosure> others) {
  const double im = std::abs(e.source.mu.imag());
  const double lo = e.center - im, hi = e.center + im;
  double isolation = kInfinity;
  for (const auto& b : bands.bands()) {
    isolation = std::min(isolation, interval_distance(lo, hi, b.lo, b.hi));
  }
  if (const auto top = bands.resolved_top(); top && hi >= *top) isolation = 0.0;
  for (const auto& o : others) {
    if (o.center == e.center && o.source.mu == e.source.mu) continue;
    const double oim = std::abs(o.source.mu.imag());
    isolation = std::min(isolation, interval_distance(lo, hi, o.center - oim, o.center + oim));
  }
  if (!(isolation > 0.0) || !std::isfinite(isolation)) {
    return {e, "isolation from bands and other enclosures not established"};
  }
  return refine(e, kIsolationSafety * isolation);
}

std::vector<Enclosure> classify(std::span<const SpectrumPoint> points,
                                const BandStructure& bands, double im_cutoff) {
  if (!(im_cutoff > 0.0)) throw InvalidInput("im_cutoff must be positive");

  std::vector<Enclosure> candidates;
  for (const auto& p : points) {
    if (std::abs(p.mu.imag()) > im_cutoff) continue;
    Enclosure e = enclose(p);
    if (const auto g = enclosing_gap(bands, e.lo(), e.hi())) {
      e.gap_index = g->index;
      candidates.push_back(e);
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Enclosure& l, const Enclosure& r) {
    if (l.gap_index != r.gap_index) return *l.gap_index < *r.gap_index;
    if (l.center != r.center) return l.center < r.center;
    return l.source.mu.imag() > r.source.mu.imag();
  });

  std::vector<Enclosure> kept;
  for (const auto& e : candidates) {
    if (!kept.empty() && kept.back().gap_index == e.gap_index && e.lo() <= kept.back().hi()) {
      if (e.half_width < kept.back().half_width) kept.back() = e;
      continue;
    }
    kept.push_back(e);
  }
  return kept;
}

DiscretizationSpec rescale_to(const DiscretizationSpec& spec_template, double s) {
  DiscretizationSpec out = spec_template;
  out.half_width = s;
  const double m = spec_template.elements_per_axis * s / spec_template.half_width;
  out.elements_per_axis = std::max(2, static_cast<int>(std::lround(m)));
  return out;
}

PollutionReport analyze_sweep(std::vector<SweepEntry> sweep, const BandStructure& bands,
                              std::span<const Enclosure> certified, double margin) {
  PollutionReport report;
  report.sweep = std::move(sweep);
  report.certified.assign(certified.begin(), certified.end());

  std::vector<Gap> finite;
  for (const auto& g : bands.gaps())
    if (g.index > 0) finite.push_back(g);

  auto gap_of = [&](double v) -> std::optional<Gap> {
    for (const auto& g : finite)
      if (g.contains(v)) return g;
    return std::nullopt;
  };

  for (std::size_t i = 0; i < report.sweep.size(); ++i) {
    for (const double v : report.sweep[i].eigenvalues) {
      const auto g = gap_of(v);
      if (!g) continue;
      const bool covered = std::any_of(certified.begin(), certified.end(), [&](const Enclosure& e) {
        return std::abs(v - e.center) <= e.half_width + margin;
      });
      if (covered) continue;

      double drift = 0.0;
      for (std::size_t j = 0; j < report.sweep.size(); ++j) {
        if (j == i) continue;
        double nearest = g->hi - g->lo;
        for (const double w : report.sweep[j].eigenvalues)
          if (g->contains(w)) nearest = std::min(nearest, std::abs(v - w));
        drift = std::max(drift, nearest);
      }
      report.spurious_candidates.push_back({report.sweep[i].half_width, v, g->index, drift});
    }
  }

  for (const auto& e : certified) {
    double lo = kInfinity, hi = -kInfinity;
    for (const auto& entry : report.sweep) {
      if (entry.eigenvalues.empty()) continue;
      const auto it = std::min_element(
          entry.eigenvalues.begin(), entry.eigenvalues.end(),
          [&](double a, double b) { return std::abs(a - e.center) < std::abs(b - e.center); });
      lo = std::min(lo, *it);
      hi = std::max(hi, *it);
    }
    report.certified_tracks.push_back({e.center, hi >= lo ? hi - lo : 0.0});
  }
  return report;
}

PollutionReport pollution_report(std::span<const double> sweep_values,
                                 const DiscretizationSpec& spec_template,
                                 const PotentialSpec& pot, const BandStructure& bands,
                                 std::span<const Enclosure> certified, double margin) {
  if (sweep_values.size() < 3) {
    throw InvalidInput("pollution sweep needs at least 3 values of s, got " +
                       std::to_string(sweep_values.size()));
  }
  std::vector<SweepEntry> sweep;
  for (const double s : sweep_values) {
    if (!(s > 0.0)) throw InvalidInput("sweep values must be positive");
    const auto spec = rescale_to(spec_template, s);
    const auto mats = assemble(spec, pot);
    sweep.push_back({s, galerkin_spectrum(mats.stiffness, mats.mass)});
  }
  return analyze_sweep(std::move(sweep), bands, certified, margin);
}

}  // namespace qpm
