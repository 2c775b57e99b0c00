#pragma once

#include <Eigen/Dense>
#include <complex>

namespace toa {

using Real = double;
using Complex = std::complex<double>;
using RealArray = Eigen::ArrayXd;
using ComplexArray = Eigen::ArrayXcd;
using Index = Eigen::Index;

inline constexpr Complex I{0.0, 1.0};

}  // namespace toa
