#pragma once

#include <vector>

namespace qpm {

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on P_n from Chebyshev initial guesses; exact for
/// polynomials of degree 2n - 1.
GaussLegendreRule gauss_legendre(int order);

}  // namespace qpm
