#pragma once

// Closed-form potentials V = V_p + V_d on R or R^2. V_p is a sum of
// 2pi-periodic cosines along coordinate axes, V_d a decaying perturbation.
// New closed forms are added by extending DecayKind and eval_potential.

#include <string>
#include <string_view>
#include <vector>

#include "qpm/types.hpp"

namespace qpm {

struct CosineTerm {
  double amplitude = 0.0;
  int axis = 0;  // 0 = x, 1 = y
};

enum class DecayKind {
  kNone,
  kGaussian,   // -c exp(-|x|^2)
  kXGaussian,  // -c x exp(-|x|^2)
};

struct PotentialSpec {
  int dimension = 1;
  std::vector<CosineTerm> periodic;
  double constant = 0.0;  // constant offset, part of V_p
  DecayKind decay = DecayKind::kNone;
  double coupling = 0.0;

  /// Throws InvalidInput on a bad dimension or axis.
  void validate() const;
  /// Sum of cosine amplitudes acting along `axis`.
  double axis_amplitude(int axis) const;
};

double eval_potential(const PotentialSpec& pot, const Point& x);
double eval_periodic_part(const PotentialSpec& pot, const Point& x);
double eval_decaying_part(const PotentialSpec& pot, const Point& x);

enum class BuiltinPotential { kMathieuGaussian, kH0, kH1, kH2 };

/// The catalog:
///   MATHIEU_GAUSSIAN  cos x - exp(-x^2)                  (c fixed at 1)
///   H0                cos x + cos y                      (c ignored)
///   H1                cos x + cos y - c exp(-(x^2+y^2))  (c > 0)
///   H2                cos x + cos y - c x exp(-(x^2+y^2)) (c > 0)
PotentialSpec builtin(BuiltinPotential name, double coupling = 1.0);

BuiltinPotential parse_builtin(std::string_view name);
std::string_view to_string(BuiltinPotential name);
std::string_view to_string(DecayKind kind);
DecayKind parse_decay(std::string_view name);

}  // namespace qpm
