#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "qpm/pipeline.hpp"

namespace qpm {

using json = nlohmann::json;

namespace {

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_sig12(v);
}

std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json point_json(const SpectrumPoint& p) {
  json j = {{"re", number(p.mu.real())},
            {"im", number(p.mu.imag())},
            {"residual", number(p.residual)},
            {"multiplicity", p.multiplicity}};
  j["conjugate_index"] = p.conjugate_index ? json(*p.conjugate_index) : json(nullptr);
  return j;
}

json enclosure_to_json(const Enclosure& e) {
  // lo and hi follow from the printed center and half width, so a parsed
  // file re-emits byte for byte.
  const double center = round_sig12(e.center);
  const double half_width = round_sig12(e.half_width);
  json j = {{"center", number(center)},
            {"half_width", number(half_width)},
            {"lo", number(center - half_width)},
            {"hi", number(center + half_width)},
            {"refined", e.refined},
            {"source", point_json(e.source)}};
  j["gap_index"] = e.gap_index ? json(*e.gap_index) : json(nullptr);
  return j;
}

double read_number(const json& j, const char* key) {
  const auto& v = j.at(key);
  return v.is_null() ? kInfinity : v.get<double>();
}

Enclosure enclosure_from_json(const json& j) {
  Enclosure e;
  e.center = read_number(j, "center");
  e.half_width = read_number(j, "half_width");
  e.refined = j.at("refined").get<bool>();
  if (!j.at("gap_index").is_null()) e.gap_index = j.at("gap_index").get<int>();
  const auto& s = j.at("source");
  e.source.mu = Complex(read_number(s, "re"), read_number(s, "im"));
  e.source.residual = read_number(s, "residual");
  e.source.multiplicity = s.at("multiplicity").get<std::size_t>();
  if (!s.at("conjugate_index").is_null()) {
    e.source.conjugate_index = s.at("conjugate_index").get<std::size_t>();
  }
  return e;
}

json gap_json(const Gap& g) {
  return {{"index", g.index}, {"lo", number(g.lo)}, {"hi", number(g.hi)}};
}

}  // namespace

std::string points_csv(const std::vector<SpectrumPoint>& points) {
  std::string out = "index,re,im,residual,conjugate_index\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    out += std::to_string(i) + ',' + g12(p.mu.real()) + ',' + g12(p.mu.imag()) + ',' +
           g12(p.residual) + ',' +
           (p.conjugate_index ? std::to_string(*p.conjugate_index) : std::string()) + '\n';
  }
  return out;
}

std::string enclosures_json(const std::vector<Enclosure>& enclosures,
                            const std::vector<Enclosure>& refined) {
  json doc;
  doc["schema"] = "qpm.enclosures/1";
  doc["enclosures"] = json::array();
  for (const auto& e : enclosures) doc["enclosures"].push_back(enclosure_to_json(e));
  doc["refined"] = json::array();
  for (const auto& e : refined) doc["refined"].push_back(enclosure_to_json(e));
  return doc.dump(2) + "\n";
}

EnclosureFile parse_enclosures_json(std::string_view text) {
  EnclosureFile out;
  try {
    const json doc = json::parse(text);
    if (doc.at("schema") != "qpm.enclosures/1") throw InvalidInput("unexpected enclosures schema");
    for (const auto& j : doc.at("enclosures")) out.enclosures.push_back(enclosure_from_json(j));
    for (const auto& j : doc.at("refined")) out.refined.push_back(enclosure_from_json(j));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed enclosures file: ") + e.what());
  }
  return out;
}

std::string bands_json(const BandStructure& bands) {
  json doc;
  doc["schema"] = "qpm.bands/1";
  doc["bands"] = json::array();
  for (const auto& b : bands.bands()) {
    doc["bands"].push_back({{"lo", number(b.lo)}, {"hi", number(b.hi)},
                            {"right_infinite", b.right_infinite()}});
  }
  doc["resolved_top"] = bands.resolved_top() ? number(*bands.resolved_top()) : json(nullptr);
  doc["gaps"] = json::array();
  for (const auto& g : bands.gaps()) doc["gaps"].push_back(gap_json(g));
  return doc.dump(2) + "\n";
}

std::string report_json(const RunConfig& config, const RunResult& result) {
  json doc;
  doc["schema"] = "qpm.report/1";
  doc["config"] = json::parse(canonical_json(config));
  doc["config_digest"] = config_digest(config);
  doc["basis_size"] = result.basis_size;
  doc["spectrum_size"] = result.points.size();
  doc["asymmetry_defect"] = number(result.asymmetry_defect);
  doc["enclosure_count"] = result.enclosures.size();
  doc["refine_diagnostics"] = result.refine_diagnostics;
  if (result.pollution) {
    const auto& p = *result.pollution;
    json pj;
    pj["margin"] = kSpuriousMargin;
    pj["sweep"] = json::array();
    for (const auto& s : p.sweep) {
      json values = json::array();
      for (const double v : s.eigenvalues) values.push_back(number(v));
      pj["sweep"].push_back({{"s", number(s.half_width)}, {"eigenvalues", values}});
    }
    pj["spurious_candidates"] = json::array();
    for (const auto& c : p.spurious_candidates) {
      pj["spurious_candidates"].push_back({{"s", number(c.half_width)},
                                           {"value", number(c.value)},
                                           {"gap_index", c.gap_index},
                                           {"drift", number(c.drift)}});
    }
    pj["certified_tracks"] = json::array();
    for (const auto& t : p.certified_tracks) {
      pj["certified_tracks"].push_back({{"center", number(t.center)}, {"drift", number(t.drift)}});
    }
    doc["pollution"] = pj;
  } else {
    doc["pollution"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

}  // namespace qpm
