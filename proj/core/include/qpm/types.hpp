#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace qpm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// A point of the computational box. In one dimension the second coordinate
/// is ignored.
using Point = std::array<double, 2>;

}  // namespace qpm
