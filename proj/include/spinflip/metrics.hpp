#pragma once

#include "spinflip/common.hpp"
#include "spinflip/spin_algebra.hpp"

namespace spinflip {

class DensityMatrix;

/// <psi|rho|psi>. Throws std::invalid_argument on dimension mismatch.
double fidelity_to_pure(const DensityMatrix& rho, const StateVector& psi);

/// Transposes the second-impurity indices of a two-impurity operator.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, Spin s);

/// log2 of the trace norm of the partial transpose.
double log_negativity(const DensityMatrix& rho, Spin s);

/// Tr(rho^2).
double purity(const DensityMatrix& rho);

struct MetricReport {
  double fidelity;
  double log_negativity;
  double purity;
};

MetricReport measure(const DensityMatrix& rho, const StateVector& target);

}  // namespace spinflip
