#pragma once

#include <complex>
#include <Eigen/Dense>

namespace hyperell {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using IMat = Eigen::MatrixXi;
using IVec = Eigen::VectorXi;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// deterministic uniform doubles from raw mt19937_64 output; avoids the
// implementation-defined std::uniform_real_distribution
inline double uniform01(std::uint64_t r) {
  return static_cast<double>(r >> 11) * 0x1.0p-53;
}

}  // namespace hyperell
