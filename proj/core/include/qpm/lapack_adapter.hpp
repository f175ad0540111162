#pragma once

// Narrow seam over the dense LAPACK drivers used by the library. Inputs are
// square row-major arrays; nothing here knows about pencils or operators.

#include <cstddef>
#include <span>
#include <vector>

#include "qpm/types.hpp"

namespace qpm::lapack {

struct DenseView {
  std::span<const double> data;  // row-major, n*n entries
  std::size_t n = 0;
};

struct GeneralizedEigenResult {
  std::vector<Complex> eigenvalues;
  // Right eigenvectors as columns, only filled when requested.
  Eigen::MatrixXcd eigenvectors;
};

/// QZ (xGGEV) for a real nonsymmetric pencil L v = mu K v. Throws SolverError
/// on non-convergence or on an infinite eigenvalue (K singular).
GeneralizedEigenResult generalized_eigen(DenseView lhs, DenseView rhs,
                                         bool want_vectors);

/// Symmetric-definite A x = lambda B x (xSYGVD). Ascending eigenvalues.
/// Throws InvalidInput when B is not positive definite.
std::vector<double> symmetric_definite_eigenvalues(DenseView a, DenseView b);

/// Row-major copy of an Eigen matrix, for feeding the views above.
std::vector<double> row_major(const Matrix& m);

}  // namespace qpm::lapack
