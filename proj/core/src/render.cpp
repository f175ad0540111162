#include <algorithm>
#include <cstdio>
#include <string>

#include "qpm/pipeline.hpp"

namespace qpm {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 450.0;
constexpr double kMargin = 50.0;

std::string fmt(const char* pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

struct Viewport {
  ComplexWindow w;
  double x(double re) const {
    return kMargin + (re - w.re_lo) / (w.re_hi - w.re_lo) * (kWidth - 2 * kMargin);
  }
  double y(double im) const {
    return kHeight - kMargin - (im - w.im_lo) / (w.im_hi - w.im_lo) * (kHeight - 2 * kMargin);
  }
};

std::string line(double x1, double y1, double x2, double y2, const char* stroke, double width) {
  return "<line x1=\"" + fmt("%.3f", x1) + "\" y1=\"" + fmt("%.3f", y1) + "\" x2=\"" +
         fmt("%.3f", x2) + "\" y2=\"" + fmt("%.3f", y2) + "\" stroke=\"" + stroke +
         "\" stroke-width=\"" + fmt("%.1f", width) + "\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor) {
  return "<text x=\"" + fmt("%.3f", x) + "\" y=\"" + fmt("%.3f", y) +
         "\" font-size=\"11\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
}

}  // namespace

std::string render_scatter(const std::vector<SpectrumPoint>& points, const BandStructure& bands,
                           const std::vector<Enclosure>& enclosures, const ComplexWindow& window) {
  const Viewport vp{window};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"450\" "
         "viewBox=\"0 0 900 450\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"900\" height=\"450\" fill=\"white\"/>\n";

  // Frame and tick labels.
  svg += "<g id=\"axes\">\n";
  svg += "<rect x=\"50\" y=\"50\" width=\"800\" height=\"350\" fill=\"none\" stroke=\"black\" "
         "stroke-width=\"1.0\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double re = window.re_lo + (window.re_hi - window.re_lo) * i / 4.0;
    const double im = window.im_lo + (window.im_hi - window.im_lo) * i / 4.0;
    svg += text(vp.x(re), kHeight - kMargin + 15.0, fmt("%.4g", re), "middle");
    svg += text(kMargin - 5.0, vp.y(im) + 4.0, fmt("%.4g", im), "end");
  }
  const bool real_axis_visible = window.im_lo <= 0.0 && 0.0 <= window.im_hi;
  if (real_axis_visible) svg += line(kMargin, vp.y(0.0), kWidth - kMargin, vp.y(0.0), "gray", 0.5);
  svg += "</g>\n";

  svg += "<g id=\"bands\">\n";
  if (real_axis_visible) {
    for (const auto& b : bands.bands()) {
      const double lo = std::max(b.lo, window.re_lo);
      const double hi = std::min(b.hi, window.re_hi);
      if (lo > hi) continue;
      svg += line(vp.x(lo), vp.y(0.0), vp.x(hi), vp.y(0.0), "orange", 4.0);
    }
  }
  svg += "</g>\n";

  svg += "<g id=\"enclosures\">\n";
  if (real_axis_visible) {
    for (const auto& e : enclosures) {
      if (e.hi() < window.re_lo || e.lo() > window.re_hi) continue;
      const double y0 = vp.y(0.0);
      const double lo = std::max(e.lo(), window.re_lo);
      const double hi = std::min(e.hi(), window.re_hi);
      svg += line(vp.x(lo), y0 - 8.0, vp.x(lo), y0 + 8.0, "green", 1.5);
      svg += line(vp.x(hi), y0 - 8.0, vp.x(hi), y0 + 8.0, "green", 1.5);
      svg += line(vp.x(lo), y0, vp.x(hi), y0, "green", 2.0);
    }
  }
  svg += "</g>\n";

  svg += "<g id=\"points\" fill=\"blue\">\n";
  for (const auto& p : points) {
    if (!window.contains(p.mu)) continue;
    svg += "<circle cx=\"" + fmt("%.3f", vp.x(p.mu.real())) + "\" cy=\"" +
           fmt("%.3f", vp.y(p.mu.imag())) + "\" r=\"2.0\"/>\n";
  }
  svg += "</g>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace qpm
