#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nfce {

using cplx = std::complex<double>;

/// Length-LN complex vector, subarray-major and raster-scan within each subarray.
using ChannelVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace nfce
