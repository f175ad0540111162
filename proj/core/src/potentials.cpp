#include "qpm/potentials.hpp"

#include <cmath>
#include <string>

#include "qpm/errors.hpp"

namespace qpm {

void PotentialSpec::validate() const {
  if (dimension != 1 && dimension != 2) {
    throw InvalidInput("potential.dimension must be 1 or 2, got " +
                       std::to_string(dimension));
  }
  for (const auto& term : periodic) {
    if (term.axis < 0 || term.axis >= dimension) {
      throw InvalidInput("potential.periodic axis " + std::to_string(term.axis) +
                         " out of range for dimension " + std::to_string(dimension));
    }
    if (!std::isfinite(term.amplitude)) {
      throw InvalidInput("potential.periodic amplitude must be finite");
    }
  }
  if (!std::isfinite(constant)) throw InvalidInput("potential.constant must be finite");
  if (!std::isfinite(coupling)) throw InvalidInput("potential.c must be finite");
}

double PotentialSpec::axis_amplitude(int axis) const {
  double sum = 0.0;
  for (const auto& term : periodic)
    if (term.axis == axis) sum += term.amplitude;
  return sum;
}

double eval_periodic_part(const PotentialSpec& pot, const Point& x) {
  double v = pot.constant;
  for (const auto& term : pot.periodic) {
    v += term.amplitude * std::cos(x[static_cast<std::size_t>(term.axis)]);
  }
  return v;
}

double eval_decaying_part(const PotentialSpec& pot, const Point& x) {
  const double r2 = pot.dimension == 1 ? x[0] * x[0] : x[0] * x[0] + x[1] * x[1];
  switch (pot.decay) {
    case DecayKind::kNone:
      return 0.0;
    case DecayKind::kGaussian:
      return -pot.coupling * std::exp(-r2);
    case DecayKind::kXGaussian:
      return -pot.coupling * x[0] * std::exp(-r2);
  }
  return 0.0;
}

double eval_potential(const PotentialSpec& pot, const Point& x) {
  return eval_periodic_part(pot, x) + eval_decaying_part(pot, x);
}

PotentialSpec builtin(BuiltinPotential name, double coupling) {
  switch (name) {
    case BuiltinPotential::kMathieuGaussian:
      return {1, {{1.0, 0}}, 0.0, DecayKind::kGaussian, 1.0};
    case BuiltinPotential::kH0:
      return {2, {{1.0, 0}, {1.0, 1}}, 0.0, DecayKind::kNone, 0.0};
    case BuiltinPotential::kH1:
    case BuiltinPotential::kH2:
      if (!(coupling > 0.0)) {
        throw InvalidInput("coupling c must be positive for " +
                           std::string(to_string(name)));
      }
      return {2,
              {{1.0, 0}, {1.0, 1}},
              0.0,
              name == BuiltinPotential::kH1 ? DecayKind::kGaussian
                                            : DecayKind::kXGaussian,
              coupling};
  }
  throw InvalidInput("unknown builtin potential");
}

BuiltinPotential parse_builtin(std::string_view name) {
  if (name == "MATHIEU_GAUSSIAN") return BuiltinPotential::kMathieuGaussian;
  if (name == "H0") return BuiltinPotential::kH0;
  if (name == "H1") return BuiltinPotential::kH1;
  if (name == "H2") return BuiltinPotential::kH2;
  throw InvalidInput("unknown builtin potential '" + std::string(name) + "'");
}

std::string_view to_string(BuiltinPotential name) {
  switch (name) {
    case BuiltinPotential::kMathieuGaussian: return "MATHIEU_GAUSSIAN";
    case BuiltinPotential::kH0: return "H0";
    case BuiltinPotential::kH1: return "H1";
    case BuiltinPotential::kH2: return "H2";
  }
  return "?";
}

std::string_view to_string(DecayKind kind) {
  switch (kind) {
    case DecayKind::kNone: return "NONE";
    case DecayKind::kGaussian: return "GAUSSIAN";
    case DecayKind::kXGaussian: return "X_GAUSSIAN";
  }
  return "?";
}

DecayKind parse_decay(std::string_view name) {
  if (name == "NONE") return DecayKind::kNone;
  if (name == "GAUSSIAN") return DecayKind::kGaussian;
  if (name == "X_GAUSSIAN") return DecayKind::kXGaussian;
  throw InvalidInput("unknown decaying part '" + std::string(name) + "'");
}

}  // namespace qpm
