#pragma once

// Clamped C^1 finite-element spaces inside W^{2,2}_0([-s, s]^d) on uniform
// tensor meshes, and assembly of the mass, stiffness and bending matrices
//
//   B_jk = <phi_j, phi_k>
//   A_jk = <grad phi_j, grad phi_k> + <V phi_j, phi_k>
//   Q_jk = <H phi_j, H phi_k>,   H = -Laplacian + V.
//
// DOF ordering. Interior nodes carry indices 1..m-1 along each axis.
//   1D: dof = 2 (i - 1) + kind,            kind: 0 value, 1 slope
//   2D: dof = 4 ((ix - 1)(m - 1) + iy - 1) + kind,
//                                          kind: 0 value, 1 d/dx, 2 d/dy, 3 d2/dxdy
// Nodes on the boundary of the box are dropped, which clamps value and
// normal derivative there.

#include <array>
#include <cstddef>
#include <vector>

#include "qpm/potentials.hpp"
#include "qpm/types.hpp"

namespace qpm {

enum class ElementFamily { kCubicHermite1D, kBognerFoxSchmit2D };

struct DiscretizationSpec {
  int dimension = 1;
  double half_width = 1.0;     // s
  int elements_per_axis = 2;   // m
  int quadrature_order = 8;    // Gauss-Legendre points per axis per element
  ElementFamily family = ElementFamily::kCubicHermite1D;

  static DiscretizationSpec one_d(double s, int m, int quadrature_order = 8) {
    return {1, s, m, quadrature_order, ElementFamily::kCubicHermite1D};
  }
  static DiscretizationSpec two_d(double s, int m, int quadrature_order = 8) {
    return {2, s, m, quadrature_order, ElementFamily::kBognerFoxSchmit2D};
  }

  /// Throws InvalidInput naming the offending field.
  void validate() const;
  std::size_t basis_size() const;
  double element_size() const { return 2.0 * half_width / elements_per_axis; }
};

enum class DofKind { kValue = 0, kSlopeX = 1, kSlopeY = 2, kTwist = 3 };

struct BasisFunction {
  std::size_t index = 0;
  std::array<int, 2> node{};           // global node index per axis (y unused in 1D)
  DofKind kind = DofKind::kValue;
  std::array<int, 2> support_begin{};  // element range [begin, end) per axis
  std::array<int, 2> support_end{};
};

struct BasisValue {
  double value = 0.0;
  std::array<double, 2> gradient{};
  double laplacian = 0.0;
};

class Basis {
 public:
  explicit Basis(const DiscretizationSpec& spec);

  const DiscretizationSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return functions_.size(); }
  const BasisFunction& operator[](std::size_t k) const { return functions_.at(k); }
  const std::vector<BasisFunction>& functions() const noexcept { return functions_; }

  /// Exact piecewise-polynomial evaluation. Throws InvalidInput when x lies
  /// outside the box.
  BasisValue eval(const BasisFunction& f, const Point& x) const;

 private:
  DiscretizationSpec spec_;
  std::vector<BasisFunction> functions_;
};

Basis build_basis(const DiscretizationSpec& spec);
BasisValue basis_eval(const Basis& basis, std::size_t k, const Point& x);

struct AssembledMatrices {
  Matrix mass;       // B
  Matrix stiffness;  // A
  Matrix bending;    // Q
};

/// Tensor Gauss-Legendre assembly. Element contributions are accumulated in
/// a fixed element order, so the result is bit-identical for any thread
/// count and exactly symmetric.
AssembledMatrices assemble(const DiscretizationSpec& spec, const PotentialSpec& pot);

namespace hermite {

struct Shape {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// The four cubic Hermite shapes on an element of length h, t in [0, 1]:
/// 0 left value, 1 left slope, 2 right value, 3 right slope.
Shape local_shape(int which, double t, double h);

}  // namespace hermite

}  // namespace qpm
