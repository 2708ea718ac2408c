#include "spinflip/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "spinflip/channel.hpp"

namespace spinflip {

double fidelity_to_pure(const DensityMatrix& rho, const StateVector& psi) {
  if (psi.size() != rho.dim()) {
    throw std::invalid_argument("fidelity_to_pure: state has dimension " +
                                std::to_string(psi.size()) + ", density matrix " +
                                std::to_string(rho.dim()));
  }
  const cplx f = psi.dot(rho.matrix() * psi);
  if (std::abs(f.imag()) > 1e-12) {
    throw std::logic_error("fidelity_to_pure: non-real overlap; density matrix not Hermitian");
  }
  return f.real();
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, Spin s) {
  const Index n = s.dim();
  if (rho.rows() != n * n || rho.cols() != n * n) {
    throw std::invalid_argument("partial_transpose: expected a (2s+1)^2 square matrix");
  }
  ComplexMatrix out(n * n, n * n);
  for (Index i1 = 0; i1 < n; ++i1)
    for (Index i2 = 0; i2 < n; ++i2)
      for (Index j1 = 0; j1 < n; ++j1)
        for (Index j2 = 0; j2 < n; ++j2)
          out(i1 * n + i2, j1 * n + j2) = rho(i1 * n + j2, j1 * n + i2);
  return out;
}

double log_negativity(const DensityMatrix& rho, Spin s) {
  const ComplexMatrix pt = partial_transpose(rho.matrix(), s);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(pt, Eigen::EigenvaluesOnly);
  double norm = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (std::abs(lambda) >= 1e-12) norm += std::abs(lambda);
  }
  return std::max(0.0, std::log2(norm));
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.matrix().squaredNorm();
}

MetricReport measure(const DensityMatrix& rho, const StateVector& target) {
  return {fidelity_to_pure(rho, target), log_negativity(rho, rho.spin()), purity(rho)};
}

}  // namespace spinflip
