#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the companion linearization, the QZ adapter or the element shape code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace qpm::testing {

using Poly = std::vector<std::complex<double>>;  // coefficients, lowest degree first

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline void poly_add(Poly& acc, const Poly& p, double sign) {
  if (acc.size() < p.size()) acc.resize(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += sign * p[i];
}

/// det(Q - 2zA + z^2 B) expanded by the Leibniz formula (n <= 4).
inline Poly determinant_polynomial(const Eigen::MatrixXd& q, const Eigen::MatrixXd& a,
                                   const Eigen::MatrixXd& b) {
  const auto n = static_cast<int>(q.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Poly det{0.0};
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    Poly term{1.0};
    for (int i = 0; i < n; ++i) {
      const int j = perm[static_cast<std::size_t>(i)];
      term = poly_mul(term, Poly{q(i, j), -2.0 * a(i, j), b(i, j)});
    }
    poly_add(det, term, inversions % 2 == 0 ? 1.0 : -1.0);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

inline std::complex<double> poly_eval(const Poly& p, std::complex<double> z) {
  std::complex<double> v = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * z + p[i];
  return v;
}

/// Durand-Kerner (Weierstrass) iteration for all roots, then Newton polish.
inline std::vector<std::complex<double>> polynomial_roots(Poly p) {
  while (p.size() > 1 && std::abs(p.back()) == 0.0) p.pop_back();
  const std::size_t deg = p.size() - 1;
  const std::complex<double> lead = p.back();
  for (auto& c : p) c /= lead;
  double radius = 0.0;
  for (std::size_t i = 0; i < deg; ++i) radius = std::max(radius, std::abs(p[i]));
  radius = 1.0 + radius;
  std::vector<std::complex<double>> z(deg);
  const std::complex<double> seed(0.4, 0.9);
  for (std::size_t i = 0; i < deg; ++i) z[i] = radius * std::pow(seed, static_cast<double>(i));
  for (int iter = 0; iter < 5000; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < deg; ++i) {
      std::complex<double> den = 1.0;
      for (std::size_t j = 0; j < deg; ++j)
        if (j != i) den *= (z[i] - z[j]);
      const auto step = poly_eval(p, z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15) break;
  }
  Poly dp(deg);
  for (std::size_t i = 1; i <= deg; ++i) dp[i - 1] = static_cast<double>(i) * p[i];
  for (auto& r : z) {
    for (int k = 0; k < 5; ++k) {
      const auto d = poly_eval(dp, r);
      if (std::abs(d) == 0.0) break;
      r -= poly_eval(p, r) / d;
    }
  }
  return z;
}

/// Largest relative distance |x - y| / (1 + |x|) under a greedy nearest
/// matching of two equally sized multisets; +inf on a size mismatch.
inline double multiset_distance(std::vector<std::complex<double>> x,
                                std::vector<std::complex<double>> y) {
  if (x.size() != y.size()) return INFINITY;
  std::vector<bool> used(y.size(), false);
  double worst = 0.0;
  for (const auto& v : x) {
    std::size_t best = y.size();
    double bd = INFINITY;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(v - y[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, bd / (1.0 + std::abs(v)));
  }
  return worst;
}

struct RandomPencil {
  Eigen::MatrixXd q, a, b;
};

/// Q = G^T G (PSD), A symmetric, B = C^T C + I (SPD); entries ~ N(0, 1).
inline RandomPencil random_pencil(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  auto draw = [&](int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = normal(rng);
    return m;
  };
  const Eigen::MatrixXd g = draw(n, n), s = draw(n, n), c = draw(n, n);
  RandomPencil p;
  p.q = g.transpose() * g;
  p.a = 0.5 * (s + s.transpose());
  p.b = c.transpose() * c / n + Eigen::MatrixXd::Identity(n, n);
  return p;
}

/// Gram triple of a random symmetric operator M on R^rows restricted to the
/// span of a random basis E: B = E^T E, A = E^T (M + t) E, Q = E^T (M + t)^2 E.
inline RandomPencil gram_pencil(const Eigen::MatrixXd& op, const Eigen::MatrixXd& basis, double t) {
  const Eigen::MatrixXd shifted =
      op + t * Eigen::MatrixXd::Identity(op.rows(), op.cols());
  const Eigen::MatrixXd image = shifted * basis;
  return {image.transpose() * image, basis.transpose() * image, basis.transpose() * basis};
}

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
          int depth) -> double {
    const double mid = 0.5 * (lo + hi);
    const double flm = f(0.5 * (lo + mid)), frm = f(0.5 * (mid + hi));
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    const double delta = left + right - whole;
    if (depth <= 0 || (depth < 36 && std::abs(delta) <= 15.0 * eps)) return left + right + delta / 15.0;
    return rec(lo, mid, flo, flm, fmid, left, 0.5 * eps, depth - 1) +
           rec(mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth - 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40);
}

}  // namespace qpm::testing
