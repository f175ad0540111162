#include "qpm/lapack_adapter.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>

#include "qpm/errors.hpp"

namespace qpm::lapack {

namespace {

void check_view(const DenseView& v, const char* what) {
  if (v.data.size() != v.n * v.n) {
    throw InvalidInput(std::string(what) + ": expected " +
                       std::to_string(v.n * v.n) + " entries, got " +
                       std::to_string(v.data.size()));
  }
}

}  // namespace

std::vector<double> row_major(const Matrix& m) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  return {rm.data(), rm.data() + rm.size()};
}

GeneralizedEigenResult generalized_eigen(DenseView lhs, DenseView rhs,
                                         bool want_vectors) {
  check_view(lhs, "generalized_eigen lhs");
  check_view(rhs, "generalized_eigen rhs");
  if (lhs.n != rhs.n) throw InvalidInput("generalized_eigen: size mismatch");
  const auto n = static_cast<lapack_int>(lhs.n);

  std::vector<double> a(lhs.data.begin(), lhs.data.end());
  std::vector<double> b(rhs.data.begin(), rhs.data.end());
  std::vector<double> alphar(lhs.n), alphai(lhs.n), beta(lhs.n);
  std::vector<double> vr(want_vectors ? lhs.n * lhs.n : 1);

  const lapack_int info = LAPACKE_dggev(
      LAPACK_ROW_MAJOR, 'N', want_vectors ? 'V' : 'N', n, a.data(), n,
      b.data(), n, alphar.data(), alphai.data(), beta.data(), nullptr, n,
      vr.data(), want_vectors ? n : 1);
  if (info != 0) {
    throw SolverError("QZ (dggev) failed with info=" + std::to_string(info) +
                      " on a pencil of order " + std::to_string(n));
  }

  GeneralizedEigenResult out;
  out.eigenvalues.resize(lhs.n);
  for (std::size_t i = 0; i < lhs.n; ++i) {
    if (beta[i] == 0.0) {
      throw SolverError("QZ returned an infinite eigenvalue at index " +
                        std::to_string(i) + "; right-hand matrix is singular");
    }
    out.eigenvalues[i] = Complex(alphar[i] / beta[i], alphai[i] / beta[i]);
  }

  if (want_vectors) {
    // Real storage: a complex pair (j, j+1) is stored as vr[:,j] +- i vr[:,j+1].
    const std::size_t m = lhs.n;
    out.eigenvectors.resize(static_cast<Eigen::Index>(m),
                            static_cast<Eigen::Index>(m));
    auto at = [&](std::size_t r, std::size_t c) { return vr[r * m + c]; };
    for (std::size_t j = 0; j < m; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      if (alphai[j] == 0.0) {
        for (std::size_t r = 0; r < m; ++r)
          out.eigenvectors(static_cast<Eigen::Index>(r), jj) = at(r, j);
      } else if (alphai[j] > 0.0 && j + 1 < m) {
        for (std::size_t r = 0; r < m; ++r) {
          const auto rr = static_cast<Eigen::Index>(r);
          out.eigenvectors(rr, jj) = Complex(at(r, j), at(r, j + 1));
          out.eigenvectors(rr, jj + 1) = Complex(at(r, j), -at(r, j + 1));
        }
        ++j;
      }
    }
  }
  return out;
}

std::vector<double> symmetric_definite_eigenvalues(DenseView a, DenseView b) {
  check_view(a, "symmetric_definite_eigenvalues lhs");
  check_view(b, "symmetric_definite_eigenvalues rhs");
  if (a.n != b.n) {
    throw InvalidInput("symmetric_definite_eigenvalues: size mismatch");
  }
  const auto n = static_cast<lapack_int>(a.n);
  std::vector<double> aa(a.data.begin(), a.data.end());
  std::vector<double> bb(b.data.begin(), b.data.end());
  std::vector<double> w(a.n);
  const lapack_int info = LAPACKE_dsygvd(LAPACK_ROW_MAJOR, 1, 'N', 'U', n,
                                         aa.data(), n, bb.data(), n, w.data());
  if (info > n) {
    throw InvalidInput("mass matrix not positive definite (leading minor " +
                       std::to_string(info - n) + ")");
  }
  if (info != 0) {
    throw SolverError("dsygvd failed with info=" + std::to_string(info));
  }
  return w;
}

}  // namespace qpm::lapack
