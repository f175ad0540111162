#include "qpm/fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "qpm/errors.hpp"
#include "qpm/quadrature.hpp"

namespace qpm {

namespace hermite {

Shape local_shape(int which, double t, double h) {
  const double t2 = t * t, t3 = t2 * t;
  switch (which) {
    case 0:
      return {1.0 - 3.0 * t2 + 2.0 * t3, (-6.0 * t + 6.0 * t2) / h, (-6.0 + 12.0 * t) / (h * h)};
    case 1:
      return {h * (t - 2.0 * t2 + t3), 1.0 - 4.0 * t + 3.0 * t2, (-4.0 + 6.0 * t) / h};
    case 2:
      return {3.0 * t2 - 2.0 * t3, (6.0 * t - 6.0 * t2) / h, (6.0 - 12.0 * t) / (h * h)};
    case 3:
      return {h * (-t2 + t3), -2.0 * t + 3.0 * t2, (-2.0 + 6.0 * t) / h};
    default:
      return {};
  }
}

}  // namespace hermite

void DiscretizationSpec::validate() const {
  if (dimension != 1 && dimension != 2) {
    throw InvalidInput("discretization.dimension must be 1 or 2, got " +
                       std::to_string(dimension));
  }
  const ElementFamily expected =
      dimension == 1 ? ElementFamily::kCubicHermite1D : ElementFamily::kBognerFoxSchmit2D;
  if (family != expected) {
    throw InvalidInput("discretization.element_family does not match dimension");
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvalidInput("discretization.half_width must be positive, got " +
                       std::to_string(half_width));
  }
  if (elements_per_axis < 2) {
    throw InvalidInput("discretization.elements_per_axis must be >= 2, got " +
                       std::to_string(elements_per_axis));
  }
  if (quadrature_order < 4) {
    throw InvalidInput("discretization.quadrature_order must be >= 4, got " +
                       std::to_string(quadrature_order));
  }
}

std::size_t DiscretizationSpec::basis_size() const {
  const auto interior = static_cast<std::size_t>(elements_per_axis - 1);
  return dimension == 1 ? 2 * interior : 4 * interior * interior;
}

namespace {

// Local shape index (0..3) of a global node/slope pair on element e, or -1
// when the node is not a corner of e.
int local_index(int node, bool slope, int element) {
  if (node == element) return slope ? 1 : 0;
  if (node == element + 1) return slope ? 3 : 2;
  return -1;
}

// Value/derivatives along one axis of the 1D factor of a basis function.
hermite::Shape axis_factor(int node, bool slope, double coord,
                           const DiscretizationSpec& spec) {
  const double h = spec.element_size();
  const double u = (coord + spec.half_width) / h;
  int e = static_cast<int>(std::floor(u));
  e = std::clamp(e, 0, spec.elements_per_axis - 1);
  // A node belongs to the element on its right, so nodal evaluation hits t = 0.
  const int l = local_index(node, slope, e);
  if (l < 0) return {};
  const double t = u - e;
  return hermite::local_shape(l, t, h);
}

void check_inside(const DiscretizationSpec& spec, const Point& x) {
  const double lim = spec.half_width * (1.0 + 1e-14);
  for (int a = 0; a < spec.dimension; ++a) {
    const double c = x[static_cast<std::size_t>(a)];
    if (!(std::abs(c) <= lim)) {
      throw InvalidInput("evaluation point outside [-s, s]^d");
    }
  }
}

// Runs body(i) for i in [0, count) across hardware threads. Each i writes to
// its own slot, so the partition does not affect the results.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers <= 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
}

// Local matrices of one element and the global DOF behind each local slot.
struct ElementBlock {
  std::vector<int> dofs;  // -1 for clamped boundary DOFs
  Matrix mass, stiffness, bending;
};

// Adds one quadrature point's contribution to the upper triangles.
void accumulate_point(ElementBlock& blk, std::size_t nloc, const double* phi,
                      const double* gx, const double* gy, const double* lap,
                      double v, double w) {
  double hphi[16];
  for (std::size_t a = 0; a < nloc; ++a) hphi[a] = -lap[a] + v * phi[a];
  for (std::size_t a = 0; a < nloc; ++a) {
    for (std::size_t b = a; b < nloc; ++b) {
      const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
      blk.mass(ia, ib) += w * phi[a] * phi[b];
      blk.stiffness(ia, ib) += w * (gx[a] * gx[b] + gy[a] * gy[b] + v * phi[a] * phi[b]);
      blk.bending(ia, ib) += w * hphi[a] * hphi[b];
    }
  }
}

void mirror_upper(Matrix& m) {
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = a + 1; b < m.cols(); ++b) m(b, a) = m(a, b);
}

ElementBlock element_1d(const DiscretizationSpec& spec, const PotentialSpec& pot,
                        const GaussLegendreRule& rule, int e) {
  const double h = spec.element_size();
  const int m = spec.elements_per_axis;
  ElementBlock blk;
  blk.mass = Matrix::Zero(4, 4);
  blk.stiffness = Matrix::Zero(4, 4);
  blk.bending = Matrix::Zero(4, 4);
  blk.dofs.resize(4);
  for (int l = 0; l < 4; ++l) {
    const int node = e + (l / 2);
    blk.dofs[static_cast<std::size_t>(l)] =
        (node == 0 || node == m) ? -1 : 2 * (node - 1) + (l % 2);
  }
  const double x0 = -spec.half_width + e * h;
  double phi[4], gx[4], gy[4] = {0, 0, 0, 0}, lap[4];
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double t = 0.5 * (1.0 + rule.nodes[q]);
    const double w = 0.5 * h * rule.weights[q];
    for (int l = 0; l < 4; ++l) {
      const auto s = hermite::local_shape(l, t, h);
      phi[l] = s.value;
      gx[l] = s.d1;
      lap[l] = s.d2;
    }
    const double v = eval_potential(pot, {x0 + t * h, 0.0});
    accumulate_point(blk, 4, phi, gx, gy, lap, v, w);
  }
  mirror_upper(blk.mass);
  mirror_upper(blk.stiffness);
  mirror_upper(blk.bending);
  return blk;
}

ElementBlock element_2d(const DiscretizationSpec& spec, const PotentialSpec& pot,
                        const GaussLegendreRule& rule, int ex, int ey) {
  const double h = spec.element_size();
  const int m = spec.elements_per_axis;
  ElementBlock blk;
  blk.mass = Matrix::Zero(16, 16);
  blk.stiffness = Matrix::Zero(16, 16);
  blk.bending = Matrix::Zero(16, 16);
  blk.dofs.resize(16);
  // Local function (lx, ly) = product of x-shape lx and y-shape ly; slot 4*lx + ly.
  for (int lx = 0; lx < 4; ++lx) {
    for (int ly = 0; ly < 4; ++ly) {
      const int nx = ex + lx / 2, ny = ey + ly / 2;
      const int kind = (lx % 2) + 2 * (ly % 2);
      const bool clamped = nx == 0 || nx == m || ny == 0 || ny == m;
      blk.dofs[static_cast<std::size_t>(4 * lx + ly)] =
          clamped ? -1 : 4 * ((nx - 1) * (m - 1) + (ny - 1)) + kind;
    }
  }
  const double x0 = -spec.half_width + ex * h;
  const double y0 = -spec.half_width + ey * h;
  const std::size_t nq = rule.nodes.size();
  std::vector<std::array<hermite::Shape, 4>> shapes(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    const double t = 0.5 * (1.0 + rule.nodes[q]);
    for (int l = 0; l < 4; ++l) shapes[q][static_cast<std::size_t>(l)] = hermite::local_shape(l, t, h);
  }
  double phi[16], gx[16], gy[16], lap[16];
  for (std::size_t qx = 0; qx < nq; ++qx) {
    for (std::size_t qy = 0; qy < nq; ++qy) {
      const double tx = 0.5 * (1.0 + rule.nodes[qx]);
      const double ty = 0.5 * (1.0 + rule.nodes[qy]);
      const double w = 0.25 * h * h * rule.weights[qx] * rule.weights[qy];
      for (std::size_t lx = 0; lx < 4; ++lx) {
        for (std::size_t ly = 0; ly < 4; ++ly) {
          const auto& f = shapes[qx][lx];
          const auto& g = shapes[qy][ly];
          const std::size_t a = 4 * lx + ly;
          phi[a] = f.value * g.value;
          gx[a] = f.d1 * g.value;
          gy[a] = f.value * g.d1;
          lap[a] = f.d2 * g.value + f.value * g.d2;
        }
      }
      const double v = eval_potential(pot, {x0 + tx * h, y0 + ty * h});
      accumulate_point(blk, 16, phi, gx, gy, lap, v, w);
    }
  }
  mirror_upper(blk.mass);
  mirror_upper(blk.stiffness);
  mirror_upper(blk.bending);
  return blk;
}

}  // namespace

Basis::Basis(const DiscretizationSpec& spec) : spec_(spec) {
  spec_.validate();
  const int m = spec_.elements_per_axis;
  functions_.reserve(spec_.basis_size());
  if (spec_.dimension == 1) {
    for (int i = 1; i < m; ++i) {
      for (int k = 0; k < 2; ++k) {
        BasisFunction f;
        f.index = functions_.size();
        f.node = {i, 0};
        f.kind = k == 0 ? DofKind::kValue : DofKind::kSlopeX;
        f.support_begin = {i - 1, 0};
        f.support_end = {i + 1, 1};
        functions_.push_back(f);
      }
    }
  } else {
    for (int ix = 1; ix < m; ++ix) {
      for (int iy = 1; iy < m; ++iy) {
        for (int k = 0; k < 4; ++k) {
          BasisFunction f;
          f.index = functions_.size();
          f.node = {ix, iy};
          f.kind = static_cast<DofKind>(k);
          f.support_begin = {ix - 1, iy - 1};
          f.support_end = {ix + 1, iy + 1};
          functions_.push_back(f);
        }
      }
    }
  }
}

BasisValue Basis::eval(const BasisFunction& f, const Point& x) const {
  check_inside(spec_, x);
  const int k = static_cast<int>(f.kind);
  const bool slope_x = (k & 1) != 0;
  const auto fx = axis_factor(f.node[0], slope_x, x[0], spec_);
  if (spec_.dimension == 1) {
    return {fx.value, {fx.d1, 0.0}, fx.d2};
  }
  const bool slope_y = (k & 2) != 0;
  const auto gy = axis_factor(f.node[1], slope_y, x[1], spec_);
  return {fx.value * gy.value,
          {fx.d1 * gy.value, fx.value * gy.d1},
          fx.d2 * gy.value + fx.value * gy.d2};
}

Basis build_basis(const DiscretizationSpec& spec) { return Basis(spec); }

BasisValue basis_eval(const Basis& basis, std::size_t k, const Point& x) {
  return basis.eval(basis[k], x);
}

AssembledMatrices assemble(const DiscretizationSpec& spec, const PotentialSpec& pot) {
  spec.validate();
  pot.validate();
  if (pot.dimension != spec.dimension) {
    throw InvalidInput("potential dimension " + std::to_string(pot.dimension) +
                       " does not match discretization dimension " +
                       std::to_string(spec.dimension));
  }
  const GaussLegendreRule rule = gauss_legendre(spec.quadrature_order);
  const int m = spec.elements_per_axis;
  const auto n = static_cast<Eigen::Index>(spec.basis_size());
  const std::size_t element_count =
      spec.dimension == 1 ? static_cast<std::size_t>(m) : static_cast<std::size_t>(m) * m;

  std::vector<ElementBlock> blocks(element_count);
  parallel_for(element_count, [&](std::size_t idx) {
    const int i = static_cast<int>(idx);
    blocks[idx] = spec.dimension == 1 ? element_1d(spec, pot, rule, i)
                                      : element_2d(spec, pot, rule, i / m, i % m);
  });

  for (const auto& blk : blocks) {
    for (const auto& mat : {blk.mass, blk.stiffness, blk.bending}) {
      if (!mat.allFinite()) throw InvalidInput("potential evaluation produced a non-finite value");
    }
  }

  AssembledMatrices out{Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n)};
  for (const auto& blk : blocks) {
    const auto nloc = static_cast<Eigen::Index>(blk.dofs.size());
    for (Eigen::Index a = 0; a < nloc; ++a) {
      const int ga = blk.dofs[static_cast<std::size_t>(a)];
      if (ga < 0) continue;
      for (Eigen::Index b = 0; b < nloc; ++b) {
        const int gb = blk.dofs[static_cast<std::size_t>(b)];
        if (gb < 0) continue;
        out.mass(ga, gb) += blk.mass(a, b);
        out.stiffness(ga, gb) += blk.stiffness(a, b);
        out.bending(ga, gb) += blk.bending(a, b);
      }
    }
  }
  return out;
}

}  // namespace qpm
