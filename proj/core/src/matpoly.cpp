#include "qpm/matpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qpm/errors.hpp"
#include "qpm/lapack_adapter.hpp"

namespace qpm {

namespace {

constexpr double kAsymmetryTolerance = 1e-8;
constexpr double kBendingPsdTolerance = 1e-10;
constexpr double kPairTolerance = 1e-8;
constexpr double kRealSnapTolerance = 1e-12;
constexpr double kClusterDiameter = 1e-8;

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Returns the relative defect and replaces m by (m + m^T) / 2.
double symmetrize(Matrix& m) {
  const double scale = max_abs(m);
  const double defect = max_abs(m - m.transpose());
  Matrix sym = 0.5 * (m + m.transpose());
  m = std::move(sym);
  return scale > 0.0 ? defect / scale : defect;
}

void require_square(const Matrix& m, const char* name) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidInput(std::string(name) + " must be a nonempty square matrix, got " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

QuadraticPencil make_pencil(Matrix q, Matrix a, Matrix b) {
  require_square(q, "Q");
  require_square(a, "A");
  require_square(b, "B");
  if (q.rows() != b.rows() || a.rows() != b.rows()) {
    throw InvalidInput("dimension mismatch: Q is " + std::to_string(q.rows()) +
                       ", A is " + std::to_string(a.rows()) + ", B is " +
                       std::to_string(b.rows()));
  }

  double defect = 0.0;
  for (Matrix* m : {&q, &a, &b}) defect = std::max(defect, symmetrize(*m));
  if (defect > kAsymmetryTolerance) {
    throw InvalidInput("asymmetry defect " + std::to_string(defect) +
                       " exceeds tolerance; assembly is inconsistent");
  }

  if (Eigen::LLT<Matrix> llt(b); llt.info() != Eigen::Success) {
    throw InvalidInput("mass matrix singular or not positive definite");
  }

  // Q is PSD up to roundoff iff Q + tol*||Q|| I admits a Cholesky factor.
  const double qnorm = q.norm();
  if (qnorm > 0.0) {
    Matrix shifted = q;
    shifted.diagonal().array() += kBendingPsdTolerance * qnorm;
    if (Eigen::LLT<Matrix> llt(shifted); llt.info() != Eigen::Success) {
      throw InvalidInput("bending matrix is not positive semidefinite");
    }
  }

  return QuadraticPencil(std::move(q), std::move(a), std::move(b), defect);
}

Eigen::VectorXcd QuadraticPencil::apply(Complex z, const Eigen::VectorXcd& x) const {
  const Eigen::VectorXd xr = x.real();
  const Eigen::VectorXd xi = x.imag();
  const Eigen::VectorXd qr = q_ * xr, qi = q_ * xi;
  const Eigen::VectorXd ar = a_ * xr, ai = a_ * xi;
  const Eigen::VectorXd br = b_ * xr, bi = b_ * xi;
  const Complex z2 = z * z;
  Eigen::VectorXcd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[i] = Complex(qr[i], qi[i]) - 2.0 * z * Complex(ar[i], ai[i]) +
             z2 * Complex(br[i], bi[i]);
  }
  return out;
}

QuadraticPencil QuadraticPencil::shifted(double t) const {
  Matrix q = q_ + 2.0 * t * a_ + t * t * b_;
  Matrix a = a_ + t * b_;
  return make_pencil(std::move(q), std::move(a), b_);
}

LinearPencil companion_linearize(const QuadraticPencil& p,
                                 const CompanionForm& form) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Matrix scaling = form.scaling ? *form.scaling : Matrix::Identity(n, n);
  if (scaling.rows() != n || scaling.cols() != n) {
    throw InvalidInput("companion scaling N has wrong dimension");
  }
  if (Eigen::FullPivLU<Matrix> lu(scaling); !lu.isInvertible()) {
    throw InvalidInput("companion scaling N is singular");
  }

  LinearPencil out{Matrix::Zero(2 * n, 2 * n), Matrix::Zero(2 * n, 2 * n)};
  switch (form.variant) {
    case CompanionVariant::kForm1:
      out.lhs.topRightCorner(n, n) = scaling;
      out.lhs.bottomLeftCorner(n, n) = -p.bending();
      out.lhs.bottomRightCorner(n, n) = 2.0 * p.stiffness();
      out.rhs.topLeftCorner(n, n) = scaling;
      out.rhs.bottomRightCorner(n, n) = p.mass();
      break;
    case CompanionVariant::kForm2:
      out.lhs.topLeftCorner(n, n) = -p.bending();
      out.lhs.bottomRightCorner(n, n) = scaling;
      out.rhs.topLeftCorner(n, n) = -2.0 * p.stiffness();
      out.rhs.topRightCorner(n, n) = p.mass();
      out.rhs.bottomLeftCorner(n, n) = scaling;
      break;
  }
  return out;
}

std::vector<SpectrumPoint> pencil_spectrum(const QuadraticPencil& p,
                                           const CompanionForm& form,
                                           const SpectrumOptions& options) {
  const LinearPencil lin = companion_linearize(p, form);
  const auto lhs = lapack::row_major(lin.lhs);
  const auto rhs = lapack::row_major(lin.rhs);
  const std::size_t m = 2 * p.size();

  lapack::GeneralizedEigenResult eig;
  try {
    eig = lapack::generalized_eigen({lhs, m}, {rhs, m}, options.compute_residuals);
  } catch (const SolverError& e) {
    throw SolverError(std::string(e.what()) + " (pencil order " +
                      std::to_string(p.size()) + ", ||Q||=" +
                      std::to_string(p.bending().norm()) + ", ||A||=" +
                      std::to_string(p.stiffness().norm()) + ", ||B||=" +
                      std::to_string(p.mass().norm()) + ")");
  }

  std::vector<SpectrumPoint> points(m);
  for (std::size_t i = 0; i < m; ++i) {
    Complex mu = eig.eigenvalues[i];
    if (std::abs(mu.imag()) < kRealSnapTolerance * (1.0 + std::abs(mu.real()))) {
      mu = Complex(mu.real(), 0.0);
    }
    points[i].mu = mu;
  }

  if (options.compute_residuals) {
    const auto n = static_cast<Eigen::Index>(p.size());
    const Eigen::MatrixXcd x = eig.eigenvectors.topRows(n);
    const Matrix xr = x.real(), xi = x.imag();
    const Matrix qr = p.bending() * xr, qi = p.bending() * xi;
    const Matrix ar = p.stiffness() * xr, ai = p.stiffness() * xi;
    const Matrix br = p.mass() * xr, bi = p.mass() * xi;
    for (std::size_t j = 0; j < m; ++j) {
      const auto c = static_cast<Eigen::Index>(j);
      const Complex z = eig.eigenvalues[j];
      const Complex z2 = z * z;
      double num = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const Complex r = Complex(qr(i, c), qi(i, c)) -
                          2.0 * z * Complex(ar(i, c), ai(i, c)) +
                          z2 * Complex(br(i, c), bi(i, c));
        num += std::norm(r);
      }
      const double den = x.col(c).norm();
      points[j].residual = den > 0.0 ? std::sqrt(num) / den : 0.0;
    }
  }

  std::stable_sort(points.begin(), points.end(),
                   [](const SpectrumPoint& l, const SpectrumPoint& r) {
                     if (l.mu.real() != r.mu.real()) return l.mu.real() < r.mu.real();
                     return l.mu.imag() < r.mu.imag();
                   });

  // Conjugate pairing: each upper point takes the nearest free lower point.
  for (std::size_t i = 0; i < m; ++i) {
    if (points[i].mu.imag() <= 0.0) continue;
    const Complex target = std::conj(points[i].mu);
    const double tol = kPairTolerance * (1.0 + std::abs(points[i].mu));
    std::optional<std::size_t> best;
    double best_dist = tol;
    for (std::size_t j = 0; j < m; ++j) {
      if (points[j].mu.imag() >= 0.0 || points[j].conjugate_index) continue;
      if (std::abs(points[j].mu.real() - target.real()) > best_dist) continue;
      const double d = std::abs(points[j].mu - target);
      if (d <= best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best) {
      points[i].conjugate_index = *best;
      points[*best].conjugate_index = i;
    }
  }

  // Multiplicity: coincident points within the cluster diameter. Points are
  // sorted by real part, so only a window around i needs checking.
  for (std::size_t i = 0; i < m; ++i) {
    const double tol = kClusterDiameter * (1.0 + std::abs(points[i].mu));
    std::size_t count = 1;
    for (std::size_t j = i + 1; j < m && points[j].mu.real() - points[i].mu.real() <= tol; ++j)
      if (std::abs(points[j].mu - points[i].mu) <= tol) ++count;
    for (std::size_t j = i; j-- > 0 && points[i].mu.real() - points[j].mu.real() <= tol;)
      if (std::abs(points[j].mu - points[i].mu) <= tol) ++count;
    points[i].multiplicity = count;
  }
  return points;
}

std::vector<double> galerkin_spectrum(const Matrix& a, const Matrix& b) {
  require_square(a, "A");
  require_square(b, "B");
  if (a.rows() != b.rows()) throw InvalidInput("dimension mismatch between A and B");
  const auto n = static_cast<std::size_t>(a.rows());
  const auto av = lapack::row_major(a);
  const auto bv = lapack::row_major(b);
  auto w = lapack::symmetric_definite_eigenvalues({av, n}, {bv, n});
  std::sort(w.begin(), w.end());
  return w;
}

}  // namespace qpm
