#include "spinflip/channel.hpp"

#include <cmath>
#include <exception>
#include <iostream>
#include <stdexcept>

#include "spinflip/metrics.hpp"

namespace spinflip {

namespace {

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

int twice_electron_m(int e) { return e == 0 ? 1 : -1; }

ComplexMatrix conditional_numerator(const KrausMixture& channel, int nu, int mu,
                                    const ComplexMatrix& rho) {
  ComplexMatrix num = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& [w, k] : channel.components) {
    const ComplexMatrix& r = k.reflect[mu][nu];
    const ComplexMatrix& t = k.transmit[mu][nu];
    num += w * (r * rho * r.adjoint() + t * rho * t.adjoint());
  }
  return num;
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
  const double herm = max_abs(m - m.adjoint());
  if (herm > tol) {
    throw std::invalid_argument("density matrix not Hermitian (deviation " +
                                std::to_string(herm) + ")");
  }
  const cplx tr = m.trace();
  if (std::abs(tr - 1.0) > tol) {
    throw std::invalid_argument("density matrix trace " + std::to_string(tr.real()) + " != 1");
  }
  ComplexMatrix h = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("density matrix has negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
  }
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) throw std::invalid_argument("cannot build a state from a zero vector");
  return DensityMatrix(psi * psi.adjoint() / norm2);
}

DensityMatrix DensityMatrix::maximally_mixed(Index d) {
  return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

double KrausSet::completeness_deviation() const {
  const Index d = dim();
  double worst = 0.0;
  for (int nu = 0; nu < 2; ++nu) {
    ComplexMatrix sum = -ComplexMatrix::Identity(d, d);
    for (int mu = 0; mu < 2; ++mu) {
      sum += reflect[mu][nu].adjoint() * reflect[mu][nu] +
             transmit[mu][nu].adjoint() * transmit[mu][nu];
    }
    worst = std::max(worst, max_abs(sum));
  }
  return worst;
}

double KrausSet::shift_rule_violation() const {
  const Spin s = Spin::from_pair_dim(dim());
  const Eigen::VectorXcd m12 = total_spin_z(s).diagonal();
  double worst = 0.0;
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) {
      const double shift = 0.5 * (twice_electron_m(nu) - twice_electron_m(mu));
      for (Index i = 0; i < dim(); ++i) {
        for (Index j = 0; j < dim(); ++j) {
          if (std::abs(m12(i).real() - m12(j).real() - shift) < 0.25) continue;
          worst = std::max({worst, std::abs(reflect[mu][nu](i, j)),
                            std::abs(transmit[mu][nu](i, j))});
        }
      }
    }
  }
  return worst;
}

double KrausMixture::completeness_deviation() const {
  const Index d = dim();
  double worst = 0.0;
  for (int nu = 0; nu < 2; ++nu) {
    ComplexMatrix sum = -ComplexMatrix::Identity(d, d);
    for (const auto& [w, k] : components) {
      for (int mu = 0; mu < 2; ++mu) {
        sum += w * (k.reflect[mu][nu].adjoint() * k.reflect[mu][nu] +
                    k.transmit[mu][nu].adjoint() * k.transmit[mu][nu]);
      }
    }
    worst = std::max(worst, max_abs(sum));
  }
  return worst;
}

KrausSet extract_kraus(const ScatteringOperators& ops) {
  const Index d = ops.config.s.pair_dim();
  if (ops.r.rows() != 2 * d || ops.t.rows() != 2 * d) {
    throw std::invalid_argument("extract_kraus: operator dimension does not match the spin");
  }
  KrausSet k;
  k.config = ops.config;
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) {
      k.reflect[mu][nu] = ops.r.block(mu * d, nu * d, d, d);
      k.transmit[mu][nu] = ops.t.block(mu * d, nu * d, d, d);
    }
  }
  return k;
}

DensityMatrix apply_unconditioned(const KrausMixture& channel, ElectronMixture rho_e,
                                  const DensityMatrix& rho12) {
  if (!(rho_e.p_up >= 0.0) || !(rho_e.p_down >= 0.0) ||
      std::abs(rho_e.p_up + rho_e.p_down - 1.0) > 1e-12) {
    throw std::invalid_argument("electron mixture must have non-negative weights summing to 1");
  }
  const std::array<double, 2> weights{rho_e.p_up, rho_e.p_down};
  ComplexMatrix out = ComplexMatrix::Zero(rho12.dim(), rho12.dim());
  for (int nu = 0; nu < 2; ++nu) {
    if (weights[nu] == 0.0) continue;
    for (int mu = 0; mu < 2; ++mu) {
      out += weights[nu] * conditional_numerator(channel, nu, mu, rho12.matrix());
    }
  }
  return DensityMatrix::from_matrix(hermitian_part(out));
}

DensityMatrix apply_unconditioned(const KrausSet& kraus, ElectronMixture rho_e,
                                  const DensityMatrix& rho12) {
  return apply_unconditioned(KrausMixture::single(kraus), rho_e, rho12);
}

ChannelOutcome apply_conditional(const KrausMixture& channel, ElectronSpin nu, ElectronSpin mu,
                                 const DensityMatrix& rho12) {
  const ComplexMatrix num = hermitian_part(
      conditional_numerator(channel, static_cast<int>(nu), static_cast<int>(mu), rho12.matrix()));
  ChannelOutcome out;
  out.probability = num.trace().real();
  if (out.probability < kVanishingProbability) return out;
  out.state = DensityMatrix::from_matrix(num / out.probability);
  return out;
}

ChannelOutcome apply_conditional(const KrausSet& kraus, ElectronSpin nu, ElectronSpin mu,
                                 const DensityMatrix& rho12) {
  return apply_conditional(KrausMixture::single(kraus), nu, mu, rho12);
}

Trajectory iterate_protocol(const KrausMixture& channel, const DensityMatrix& rho0, int n,
                            const StateVector& target, ProtocolStep step) {
  if (n < 0) throw std::invalid_argument("iterate_protocol: n must be >= 0");
  const Spin s = rho0.spin();
  Trajectory traj;
  traj.records.reserve(static_cast<std::size_t>(n) + 1);

  auto record = [&](int j, const DensityMatrix& rho, double cumulative, double step_p) {
    traj.records.push_back({j, rho, fidelity_to_pure(rho, target), cumulative,
                            log_negativity(rho, s), purity(rho), step_p});
  };

  record(0, rho0, 1.0, 1.0);
  ElectronMixture injected;
  if (step.inject == ElectronSpin::down) injected = {0.0, 1.0};

  for (int j = 1; j <= n; ++j) {
    const auto& prev = traj.records.back();
    if (!step.detect) {
      record(j, apply_unconditioned(channel, injected, prev.state), prev.cumulative_probability,
             1.0);
      continue;
    }
    auto outcome = apply_conditional(channel, step.inject, *step.detect, prev.state);
    if (!outcome.defined()) {
      traj.truncated = true;
      break;
    }
    record(j, *outcome.state, prev.cumulative_probability * outcome.probability,
           outcome.probability);
  }
  return traj;
}

Trajectory iterate_protocol(const KrausSet& kraus, const DensityMatrix& rho0, int n,
                            const StateVector& target, ProtocolStep step) {
  return iterate_protocol(KrausMixture::single(kraus), rho0, n, target, step);
}

ModelConfig config_at_relative_k(const ModelConfig& config, double delta) {
  ModelConfig c = config;
  c.kx0_over_pi = config.kx0_over_pi * (1.0 + delta);
  // Electron: v = k/m* grows with k, so J/v shrinks. Photon: v_ph is fixed.
  if (config.dispersion == Dispersion::quadratic) c.g = config.g / (1.0 + delta);
  return c;
}

KrausMixture gaussian_k_kraus(const ModelConfig& config, double sigma_over_k, int nodes,
                              Execution exec) {
  if (!(sigma_over_k > 0.0) || !(sigma_over_k < 0.2)) {
    throw std::invalid_argument("gaussian_k_kraus: sigma_over_k must lie in (0, 0.2)");
  }
  if (nodes < 3 || nodes % 2 == 0) {
    throw std::invalid_argument("gaussian_k_kraus: node count must be odd and >= 3");
  }
  config.validate();

  std::vector<double> deltas(static_cast<std::size_t>(nodes));
  std::vector<double> weights(deltas.size());
  double total = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double x = -3.0 + 6.0 * j / (nodes - 1);
    deltas[static_cast<std::size_t>(j)] = x * sigma_over_k;
    weights[static_cast<std::size_t>(j)] = std::exp(-0.5 * x * x);
    total += weights[static_cast<std::size_t>(j)];
  }

  KrausMixture mix;
  mix.components.resize(deltas.size());
  std::vector<std::exception_ptr> errors(deltas.size());
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (int j = 0; j < nodes; ++j) {
    const auto u = static_cast<std::size_t>(j);
    try {
      mix.components[u] = {weights[u] / total,
                           extract_kraus(solve_two_impurity(config_at_relative_k(config, deltas[u])))};
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return mix;
}

double flip_probability(const KrausSet& kraus, const CoupledBasisTransform& cb, int twice_s12) {
  if (kraus.config && !kraus.config->resonant()) {
    std::clog << "spinflip: warning: flip probability requested off resonance ("
              << kraus.config->describe() << ")\n";
  }
  const StateVector psi = cb.state(twice_s12, 0);
  return (kraus.R(ElectronSpin::down, ElectronSpin::up) * psi).squaredNorm() +
         (kraus.T(ElectronSpin::down, ElectronSpin::up) * psi).squaredNorm();
}

}  // namespace spinflip
