#pragma once

#include <complex>

#include <Eigen/Dense>

namespace spinflip {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Selects the OpenMP kernel or the serial reference path for the
/// data-parallel loops (grid sweeps, quadrature-node solves).
enum class Execution { serial, parallel };

/// Largest entry magnitude.
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace spinflip
