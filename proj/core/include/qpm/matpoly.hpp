#pragma once

// Quadratic matrix polynomials P(z) = Q - 2zA + z^2 B with real symmetric
// coefficients, their companion linearizations and spectra.

#include <cstddef>
#include <optional>
#include <vector>

#include "qpm/types.hpp"

namespace qpm {

/// Immutable, validated triple (Q, A, B). Q is the bending matrix (Gram of
/// H phi_j), A the stiffness matrix and B the mass matrix.
class QuadraticPencil {
 public:
  const Matrix& bending() const noexcept { return q_; }
  const Matrix& stiffness() const noexcept { return a_; }
  const Matrix& mass() const noexcept { return b_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(b_.rows()); }

  /// Largest relative asymmetry ||M - M^T||_max / ||M||_max seen on input,
  /// before symmetrization.
  double asymmetry_defect() const noexcept { return asymmetry_defect_; }

  /// P(z) x for a complex vector x.
  Eigen::VectorXcd apply(Complex z, const Eigen::VectorXcd& x) const;

  /// The pencil of the potential shifted by t: (Q + 2tA + t^2 B, A + tB, B).
  /// Its spectrum is Spec(P) + t.
  QuadraticPencil shifted(double t) const;

 private:
  friend QuadraticPencil make_pencil(Matrix, Matrix, Matrix);
  QuadraticPencil(Matrix q, Matrix a, Matrix b, double defect)
      : q_(std::move(q)), a_(std::move(a)), b_(std::move(b)),
        asymmetry_defect_(defect) {}

  Matrix q_;
  Matrix a_;
  Matrix b_;
  double asymmetry_defect_ = 0.0;
};

/// Validates and symmetrizes (Q, A, B). Throws InvalidInput on a dimension
/// mismatch, an asymmetry defect above 1e-8 relative, a mass matrix that is
/// not positive definite, or a bending matrix with an eigenvalue below
/// -1e-10 ||Q||.
QuadraticPencil make_pencil(Matrix q, Matrix a, Matrix b);

enum class CompanionVariant { kForm1, kForm2 };

/// Choice of companion linearization and its free nonsingular block N.
struct CompanionForm {
  CompanionVariant variant = CompanionVariant::kForm1;
  std::optional<Matrix> scaling;  // N; identity when empty

  static CompanionForm identity(CompanionVariant v = CompanionVariant::kForm1) {
    return {v, std::nullopt};
  }
  static CompanionForm mass_scaled(const QuadraticPencil& p,
                                   CompanionVariant v = CompanionVariant::kForm1) {
    return {v, p.mass()};
  }
};

struct LinearPencil {
  Matrix lhs;  // L
  Matrix rhs;  // K
};

/// FORM1: L = [[0, N], [-Q, 2A]],  K = [[N, 0], [0, B]]
/// FORM2: L = [[-Q, 0], [0, N]],   K = [[-2A, B], [N, 0]]
/// In both, L v = mu K v with v = (x, mu x) iff P(mu) x = 0.
LinearPencil companion_linearize(const QuadraticPencil& p,
                                 const CompanionForm& form);

struct SpectrumPoint {
  Complex mu;
  std::optional<std::size_t> conjugate_index;
  double residual = 0.0;       // ||P(mu) x|| / ||x||
  std::size_t multiplicity = 1;  // size of the coincident cluster
};

struct SpectrumOptions {
  bool compute_residuals = true;
};

/// All 2n eigenvalues of P, sorted by (Re, Im), snapped to the real axis
/// when |Im| < 1e-12 (1 + |Re|), with conjugate partners linked.
std::vector<SpectrumPoint> pencil_spectrum(const QuadraticPencil& p,
                                           const CompanionForm& form,
                                           const SpectrumOptions& options = {});

/// Eigenvalues of the Galerkin pencil A u = lambda B u, nondecreasing.
std::vector<double> galerkin_spectrum(const Matrix& a, const Matrix& b);

}  // namespace qpm
