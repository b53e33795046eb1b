#ifndef XLRIS_TYPES_HPP
#define XLRIS_TYPES_HPP

#include <complex>
#include <Eigen/Dense>

namespace xlris {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace xlris

#endif
