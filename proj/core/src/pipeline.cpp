#include "qpm/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qpm {

using json = nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {
    "schema", "potential", "discretization", "companion", "im_cutoff", "bands",
    "sweep",  "window",    "compute_residuals", "outputs"};

template <typename T>
T field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw InvalidInput(path + key + " is required");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(path + key + " has the wrong type");
  }
}

template <typename T>
T field_or(const json& obj, const std::string& key, const std::string& path, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  return field<T>(obj, key, path);
}

PotentialSpec parse_potential(const json& p, std::optional<BuiltinPotential>& name) {
  if (!p.is_object()) throw InvalidInput("potential must be an object");
  if (p.contains("builtin")) {
    name = parse_builtin(field<std::string>(p, "builtin", "potential."));
    return builtin(*name, field_or<double>(p, "c", "potential.", 1.0));
  }
  PotentialSpec pot;
  pot.dimension = field<int>(p, "dimension", "potential.");
  if (p.contains("periodic")) {
    if (!p.at("periodic").is_array()) throw InvalidInput("potential.periodic must be an array");
    for (const auto& t : p.at("periodic")) {
      pot.periodic.push_back({field<double>(t, "amplitude", "potential.periodic[]."),
                              field_or<int>(t, "axis", "potential.periodic[].", 0)});
    }
  }
  pot.constant = field_or<double>(p, "constant", "potential.", 0.0);
  if (p.contains("decay")) {
    const auto& d = p.at("decay");
    pot.decay = parse_decay(field<std::string>(d, "kind", "potential.decay."));
    pot.coupling = field_or<double>(d, "c", "potential.decay.", 0.0);
  }
  pot.validate();
  return pot;
}

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

double round_sig12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_g12(v).c_str(), nullptr);
}

void RunConfig::validate() const {
  potential.validate();
  discretization.validate();
  if (potential.dimension != discretization.dimension) {
    throw InvalidInput("potential.dimension does not match discretization.dimension");
  }
  if (!(im_cutoff > 0.0) || !std::isfinite(im_cutoff)) {
    throw InvalidInput("im_cutoff must be positive");
  }
  if (n_bands < 1) throw InvalidInput("bands.n_bands must be positive");
  if (fourier_modes < 4 * n_bands) throw InvalidInput("bands.fourier_modes must be >= 4*n_bands");
  if (!sweep.empty() && sweep.size() < 3) throw InvalidInput("sweep needs at least 3 values");
  for (const double s : sweep) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("sweep values must be positive");
  }
  if (!(window.re_lo < window.re_hi) || !(window.im_lo < window.im_hi)) {
    throw InvalidInput("window must be a nonempty rectangle");
  }
}

RunConfig parse_run_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!kTopLevelKeys.contains(key)) throw InvalidInput("unknown config field '" + key + "'");
  }
  if (const auto schema = field<std::string>(doc, "schema", ""); schema != kRunConfigSchema) {
    throw InvalidInput("schema must be '" + std::string(kRunConfigSchema) + "', got '" + schema + "'");
  }

  RunConfig cfg;
  cfg.potential = parse_potential(field<json>(doc, "potential", ""), cfg.builtin_name);

  const auto d = field<json>(doc, "discretization", "");
  cfg.discretization.dimension = field_or<int>(d, "dimension", "discretization.", cfg.potential.dimension);
  cfg.discretization.half_width = field<double>(d, "half_width", "discretization.");
  cfg.discretization.elements_per_axis = field<int>(d, "elements_per_axis", "discretization.");
  cfg.discretization.quadrature_order = field_or<int>(d, "quadrature_order", "discretization.", 8);
  const std::string family = field_or<std::string>(
      d, "element_family", "discretization.",
      cfg.discretization.dimension == 2 ? "BFS_2D" : "CUBIC_HERMITE_1D");
  if (family == "CUBIC_HERMITE_1D") {
    cfg.discretization.family = ElementFamily::kCubicHermite1D;
  } else if (family == "BFS_2D") {
    cfg.discretization.family = ElementFamily::kBognerFoxSchmit2D;
  } else {
    throw InvalidInput("discretization.element_family '" + family + "' is unknown");
  }

  const bool two_d = cfg.discretization.dimension == 2;
  if (two_d) cfg.window = {-1.0, 0.5, -1.5, 1.5};
  cfg.im_cutoff = field_or<double>(doc, "im_cutoff", "", two_d ? 0.15 : 0.05);

  if (doc.contains("companion")) {
    const auto& c = doc.at("companion");
    const auto form = field_or<std::string>(c, "form", "companion.", "FORM1");
    if (form == "FORM1") cfg.companion = CompanionVariant::kForm1;
    else if (form == "FORM2") cfg.companion = CompanionVariant::kForm2;
    else throw InvalidInput("companion.form must be FORM1 or FORM2");
    const auto scaling = field_or<std::string>(c, "scaling", "companion.", "identity");
    if (scaling == "identity") cfg.mass_scaled_companion = false;
    else if (scaling == "mass") cfg.mass_scaled_companion = true;
    else throw InvalidInput("companion.scaling must be identity or mass");
  }
  if (doc.contains("bands")) {
    const auto& b = doc.at("bands");
    cfg.n_bands = field_or<int>(b, "n_bands", "bands.", cfg.n_bands);
    cfg.fourier_modes = field_or<int>(b, "fourier_modes", "bands.", cfg.fourier_modes);
  }
  cfg.sweep = field_or<std::vector<double>>(doc, "sweep", "", {});
  if (doc.contains("window")) {
    const auto& w = doc.at("window");
    const auto re = field<std::vector<double>>(w, "re", "window.");
    const auto im = field<std::vector<double>>(w, "im", "window.");
    if (re.size() != 2 || im.size() != 2) throw InvalidInput("window.re and window.im need two values");
    cfg.window = {re[0], re[1], im[0], im[1]};
  }
  cfg.compute_residuals = field_or<bool>(doc, "compute_residuals", "", true);
  if (doc.contains("outputs")) {
    const auto& o = doc.at("outputs");
    cfg.outputs.directory = field_or<std::string>(o, "directory", "outputs.", ".");
    cfg.outputs.points = field_or<std::string>(o, "points", "outputs.", cfg.outputs.points);
    cfg.outputs.enclosures = field_or<std::string>(o, "enclosures", "outputs.", cfg.outputs.enclosures);
    cfg.outputs.bands = field_or<std::string>(o, "bands", "outputs.", cfg.outputs.bands);
    cfg.outputs.scatter = field_or<std::string>(o, "scatter", "outputs.", cfg.outputs.scatter);
    cfg.outputs.report = field_or<std::string>(o, "report", "outputs.", cfg.outputs.report);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string canonical_json(const RunConfig& c) {
  json doc;
  doc["schema"] = kRunConfigSchema;
  json pot;
  pot["dimension"] = c.potential.dimension;
  pot["periodic"] = json::array();
  for (const auto& t : c.potential.periodic) {
    pot["periodic"].push_back({{"amplitude", round_sig12(t.amplitude)}, {"axis", t.axis}});
  }
  pot["constant"] = round_sig12(c.potential.constant);
  pot["decay"] = {{"kind", std::string(to_string(c.potential.decay))},
                  {"c", round_sig12(c.potential.coupling)}};
  if (c.builtin_name) pot["builtin"] = std::string(to_string(*c.builtin_name));
  doc["potential"] = pot;
  doc["discretization"] = {
      {"dimension", c.discretization.dimension},
      {"half_width", round_sig12(c.discretization.half_width)},
      {"elements_per_axis", c.discretization.elements_per_axis},
      {"quadrature_order", c.discretization.quadrature_order},
      {"element_family", c.discretization.dimension == 2 ? "BFS_2D" : "CUBIC_HERMITE_1D"}};
  doc["companion"] = {{"form", c.companion == CompanionVariant::kForm1 ? "FORM1" : "FORM2"},
                      {"scaling", c.mass_scaled_companion ? "mass" : "identity"}};
  doc["im_cutoff"] = round_sig12(c.im_cutoff);
  doc["bands"] = {{"n_bands", c.n_bands}, {"fourier_modes", c.fourier_modes}};
  doc["sweep"] = json::array();
  for (const double s : c.sweep) doc["sweep"].push_back(round_sig12(s));
  doc["window"] = {{"re", {round_sig12(c.window.re_lo), round_sig12(c.window.re_hi)}},
                   {"im", {round_sig12(c.window.im_lo), round_sig12(c.window.im_hi)}}};
  doc["compute_residuals"] = c.compute_residuals;
  return doc.dump();
}

std::string config_digest(const RunConfig& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char ch : canonical_json(config)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BandStructure background_bands(const PotentialSpec& pot, int n_bands, int fourier_modes) {
  pot.validate();
  if (pot.dimension == 1) {
    return shift_bands(mathieu_band_edges(pot.axis_amplitude(0), n_bands, fourier_modes),
                       pot.constant);
  }
  return shift_bands(sum_bands(mathieu_band_edges(pot.axis_amplitude(0), n_bands, fourier_modes),
                               mathieu_band_edges(pot.axis_amplitude(1), n_bands, fourier_modes)),
                     pot.constant);
}

namespace {

class StageRunner {
 public:
  StageRunner(const RunConfig& config, RunResult& result)
      : digest_(config_digest(config)), result_(result) {}

  template <typename Fn>
  auto operator()(const std::string& stage, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto record = [&] {
      result_.timings.push_back(
          {stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
    };
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        record();
      } else {
        auto value = fn();
        record();
        return value;
      }
    } catch (const SolverError& e) {
      throw StageError(StageError::Kind::kSolver, stage, message(stage, e.what()));
    } catch (const InvalidInput& e) {
      throw StageError(StageError::Kind::kInput, stage, message(stage, e.what()));
    }
  }

 private:
  std::string message(const std::string& stage, const char* what) const {
    return "stage '" + stage + "' failed (config " + digest_ + "): " + what;
  }

  std::string digest_;
  RunResult& result_;
};

void write_all_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  std::vector<std::filesystem::path> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) std::filesystem::remove(t, ec);
  };
  for (const auto& [path, content] : files) {
    auto tmp = path;
    tmp += ".tmp";
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      cleanup();
      throw StageError(StageError::Kind::kIo, "write", "cannot write " + tmp.string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    std::filesystem::rename(temps[i], files[i].first, ec);
    if (ec) {
      cleanup();
      // Files already moved would form an incomplete set.
      std::error_code ignored;
      for (std::size_t j = 0; j < i; ++j) std::filesystem::remove(files[j].first, ignored);
      throw StageError(StageError::Kind::kIo, "write",
                       "cannot move " + temps[i].string() + " into place: " + ec.message());
    }
  }
}

}  // namespace

RunResult compute(const RunConfig& config, bool with_sweep) {
  RunResult result;
  StageRunner stage(config, result);

  stage("config", [&] {
    config.validate();
    if (with_sweep && config.sweep.empty()) throw InvalidInput("sweep is required for this command");
  });
  result.bands = stage("bands", [&] {
    return background_bands(config.potential, config.n_bands, config.fourier_modes);
  });
  auto mats = stage("assemble", [&] { return assemble(config.discretization, config.potential); });
  result.basis_size = static_cast<std::size_t>(mats.mass.rows());
  const auto pencil = stage("pencil", [&] {
    return make_pencil(std::move(mats.bending), std::move(mats.stiffness), std::move(mats.mass));
  });
  result.asymmetry_defect = pencil.asymmetry_defect();
  result.points = stage("spectrum", [&] {
    const CompanionForm form = config.mass_scaled_companion
                                   ? CompanionForm::mass_scaled(pencil, config.companion)
                                   : CompanionForm::identity(config.companion);
    return pencil_spectrum(pencil, form, {config.compute_residuals});
  });
  result.enclosures = stage("classify", [&] {
    return classify(result.points, result.bands, config.im_cutoff);
  });
  stage("refine", [&] {
    for (const auto& e : result.enclosures) {
      auto outcome = refine_isolated(e, result.bands, result.enclosures);
      if (outcome.diagnostic) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "center %.12g: ", e.center);
        result.refine_diagnostics.push_back(buf + *outcome.diagnostic);
      }
      result.refined.push_back(outcome.enclosure);
    }
  });
  if (with_sweep && !config.sweep.empty()) {
    result.pollution = stage("sweep", [&] {
      return pollution_report(config.sweep, config.discretization, config.potential,
                              result.bands, result.enclosures);
    });
  }
  return result;
}

namespace {

RunResult compute_and_write(const RunConfig& config, bool sweep_required) {
  RunResult result = compute(config, sweep_required || !config.sweep.empty());
  if (sweep_required && !result.pollution) {
    throw StageError(StageError::Kind::kInput, "config", "sweep is required for this command");
  }
  const auto& o = config.outputs;
  std::error_code ec;
  std::filesystem::create_directories(o.directory, ec);
  if (ec) {
    throw StageError(StageError::Kind::kIo, "write",
                     "cannot create output directory " + o.directory.string());
  }
  const std::vector<std::pair<std::filesystem::path, std::string>> files = {
      {o.directory / o.points, points_csv(result.points)},
      {o.directory / o.enclosures, enclosures_json(result.enclosures, result.refined)},
      {o.directory / o.bands, bands_json(result.bands)},
      {o.directory / o.scatter,
       render_scatter(result.points, result.bands, result.enclosures, config.window)},
      {o.directory / o.report, report_json(config, result)},
  };
  write_all_atomically(files);
  for (const auto& f : files) result.written.push_back(f.first);
  return result;
}

}  // namespace

RunResult run(const RunConfig& config) { return compute_and_write(config, false); }

RunResult run_sweep(const RunConfig& config) {
  if (config.sweep.empty()) {
    throw StageError(StageError::Kind::kInput, "config",
                     "stage 'config' failed (config " + config_digest(config) +
                         "): sweep is required for this command");
  }
  return compute_and_write(config, true);
}

}  // namespace qpm
