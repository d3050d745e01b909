// types.hpp — shared scalar/matrix aliases and constants

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace becmon {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

} // namespace becmon
