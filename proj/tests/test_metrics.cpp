#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spinflip/channel.hpp"
#include "spinflip/metrics.hpp"
#include "test_support.hpp"

namespace spinflip {
namespace {

using testing::random_density;
using testing::random_state;

// Pure-state oracle: E_N = 2 log2(sum of Schmidt coefficients).
double schmidt_log_negativity(const StateVector& psi, Spin s) {
  const Index n = s.dim();
  ComplexMatrix c(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) c(i, j) = psi(i * n + j);
  Eigen::JacobiSVD<ComplexMatrix> svd(c);
  return 2.0 * std::log2(svd.singularValues().sum());
}

TEST(Fidelity, PureAndMixedReferenceValues) {
  std::mt19937_64 rng(61);
  for (int tw : {1, 2, 3}) {
    const Spin s(tw);
    const StateVector psi = random_state(rng, s.pair_dim());
    EXPECT_NEAR(fidelity_to_pure(DensityMatrix::from_pure(psi), psi), 1.0, 1e-14);
    EXPECT_NEAR(fidelity_to_pure(DensityMatrix::maximally_mixed(s.pair_dim()), psi),
                1.0 / s.pair_dim(), 1e-14);
  }
}

TEST(Fidelity, LinearInDensityMatrix) {
  std::mt19937_64 rng(67);
  const Spin s(2);
  const auto a = random_density(rng, s.pair_dim());
  const auto b = random_density(rng, s.pair_dim());
  const StateVector psi = random_state(rng, s.pair_dim());
  const auto mix = DensityMatrix::from_matrix(0.3 * a.matrix() + 0.7 * b.matrix());
  EXPECT_NEAR(fidelity_to_pure(mix, psi),
              0.3 * fidelity_to_pure(a, psi) + 0.7 * fidelity_to_pure(b, psi), 1e-14);
}

TEST(Fidelity, RejectsDimensionMismatch) {
  EXPECT_THROW(fidelity_to_pure(DensityMatrix::maximally_mixed(4), StateVector::Zero(9)),
               std::invalid_argument);
}

TEST(PartialTranspose, InvolutionAndTrace) {
  std::mt19937_64 rng(71);
  for (int tw : {1, 2, 3}) {
    const Spin s(tw);
    const auto rho = random_density(rng, s.pair_dim());
    const ComplexMatrix pt = partial_transpose(rho.matrix(), s);
    EXPECT_LT(max_abs(partial_transpose(pt, s) - rho.matrix()), 1e-16);
    EXPECT_NEAR(std::abs(pt.trace() - rho.matrix().trace()), 0.0, 1e-15);
    EXPECT_LT(max_abs(pt - pt.adjoint()), 1e-15);
  }
}

TEST(PartialTranspose, TwoQubitSingletSpectrum) {
  const Spin s(1);
  const ComplexMatrix pt =
      partial_transpose(DensityMatrix::from_pure(singlet_state(s)).matrix(), s);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(pt);
  EXPECT_NEAR(es.eigenvalues()(0), -0.5, 1e-15);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(es.eigenvalues()(i), 0.5, 1e-15);
}

TEST(PartialTranspose, RejectsWrongDimension) {
  EXPECT_THROW(partial_transpose(ComplexMatrix::Identity(4, 4), Spin(2)), std::invalid_argument);
}

TEST(LogNegativity, ProductStatesAreSeparable) {
  for (int tw : {1, 2, 3, 4}) {
    const Spin s(tw);
    EXPECT_EQ(log_negativity(DensityMatrix::from_pure(product_state(s, tw, -tw)), s), 0.0);
    EXPECT_NEAR(log_negativity(DensityMatrix::maximally_mixed(s.pair_dim()), s), 0.0, 1e-14);
  }
}

TEST(LogNegativity, SingletIsMaximallyEntangled) {
  for (int tw : {1, 2, 3, 4, 5}) {
    const Spin s(tw);
    EXPECT_NEAR(log_negativity(DensityMatrix::from_pure(singlet_state(s)), s),
                std::log2(tw + 1.0), 1e-12);
  }
}

TEST(LogNegativity, MatchesSchmidtOracleOnRandomPureStates) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const Spin s(1 + trial % 4);
    const StateVector psi = random_state(rng, s.pair_dim());
    EXPECT_NEAR(log_negativity(DensityMatrix::from_pure(psi), s), schmidt_log_negativity(psi, s),
                1e-10);
  }
}

TEST(LogNegativity, BoundedAlongTrajectories) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 15; ++trial) {
    const auto cfg = testing::random_config(rng);
    const auto k = extract_kraus(solve_two_impurity(cfg));
    const auto traj = iterate_protocol(k, random_density(rng, cfg.s.pair_dim()), 8,
                                       singlet_state(cfg.s));
    const double bound = std::log2(static_cast<double>(cfg.s.dim()));
    for (const auto& r : traj.records) {
      EXPECT_GE(r.log_negativity, 0.0);
      EXPECT_LE(r.log_negativity, bound + 1e-10);
      EXPECT_LE(r.purity, 1.0 + 1e-12);
      EXPECT_GE(r.purity, 1.0 / cfg.s.pair_dim() - 1e-12);
    }
  }
}

TEST(Purity, ReferenceValues) {
  EXPECT_NEAR(purity(DensityMatrix::from_pure(singlet_state(Spin(2)))), 1.0, 1e-14);
  EXPECT_NEAR(purity(DensityMatrix::maximally_mixed(9)), 1.0 / 9.0, 1e-15);
}

TEST(Measure, BundlesAllMetrics) {
  const Spin s(1);
  const auto rho = DensityMatrix::from_pure(singlet_state(s));
  const auto m = measure(rho, singlet_state(s));
  EXPECT_NEAR(m.fidelity, 1.0, 1e-14);
  EXPECT_NEAR(m.log_negativity, 1.0, 1e-12);
  EXPECT_NEAR(m.purity, 1.0, 1e-14);
}

}  // namespace
}  // namespace spinflip
