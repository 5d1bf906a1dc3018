#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace arise {

// Observations: one row per timestamp, one column per component series.
using TimeSeriesMatrix = Eigen::MatrixXd;

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using MatrixXd = Eigen::MatrixXd;
using VectorXd = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

} // namespace arise
