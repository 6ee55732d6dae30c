#pragma once

#include <complex>

#include <Eigen/Dense>

namespace fracspec {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace fracspec
