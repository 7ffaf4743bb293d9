#pragma once

#include <complex>
#include <Eigen/Dense>

namespace dce {

using Real = double;
using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr Real kPi = 3.141592653589793238462643383279502884;

}  // namespace dce
