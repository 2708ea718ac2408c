#pragma once

#include <random>
#include <vector>

#include "spinflip/channel.hpp"
#include "spinflip/scattering.hpp"

namespace spinflip::testing {

inline StateVector random_state(std::mt19937_64& rng, Index dim) {
  std::normal_distribution<double> gauss;
  StateVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  return v.normalized();
}

/// Mixture of `rank` random pure states with random weights.
inline DensityMatrix random_density(std::mt19937_64& rng, Index dim, int rank = 3) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  double total = 0.0;
  for (int j = 0; j < rank; ++j) {
    const double w = unif(rng);
    const StateVector v = random_state(rng, dim);
    m += w * v * v.adjoint();
    total += w;
  }
  return DensityMatrix::from_matrix(m / total);
}

/// s in {1/2, 1, 3/2, 2}, g in [0.1, 3], kx0/pi in [0.1, 4], both couplings;
/// XY draws either ideal rates or random explicit rates.
inline ModelConfig random_config(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> twice(1, 4);
  std::uniform_real_distribution<double> g(0.1, 3.0);
  std::uniform_real_distribution<double> kx(0.1, 4.0);
  std::bernoulli_distribution coin;
  const Spin s(twice(rng));
  if (coin(rng)) return ModelConfig::heisenberg(s, g(rng), kx(rng));
  if (coin(rng)) return ModelConfig::xy(s, g(rng), kx(rng));
  std::vector<double> rates;
  for (int j = 0; j < s.twice(); ++j) rates.push_back(g(rng));
  return ModelConfig::xy_rates(s, rates, kx(rng));
}

/// Pure state in the S12z = 0 sector: random amplitudes on |m,-m>.
inline StateVector random_zero_m_state(std::mt19937_64& rng, Spin s) {
  std::normal_distribution<double> gauss;
  StateVector v = StateVector::Zero(s.pair_dim());
  for (Index i = 0; i < s.dim(); ++i) {
    const int tm = s.twice_m_at(i);
    v(i * s.dim() + s.index_of(-tm)) = cplx(gauss(rng), gauss(rng));
  }
  return v.normalized();
}

}  // namespace spinflip::testing
