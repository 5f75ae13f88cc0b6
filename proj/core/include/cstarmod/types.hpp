#pragma once

#include <complex>
#include <Eigen/Dense>

namespace cstarmod {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

// Relative threshold deciding numerical rank / spectral support everywhere.
inline constexpr double kRankEps = 1e-10;

// Default comparison tolerance for verdicts and CLI checks.
inline constexpr double kDefaultTol = 1e-9;

// Residual budget for structural invariants (projections, d^2 = 0, compressions).
inline constexpr double kStructTol = 1e-10;

}  // namespace cstarmod
