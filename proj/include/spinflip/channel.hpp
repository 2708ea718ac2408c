#pragma once

#include <array>
#include <optional>
#include <vector>

#include "spinflip/common.hpp"
#include "spinflip/scattering.hpp"
#include "spinflip/spin_algebra.hpp"

namespace spinflip {

/// Validated two-impurity state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  /// Throws std::invalid_argument if any invariant is violated beyond tol.
  static DensityMatrix from_matrix(ComplexMatrix m, double tol = 1e-10);
  /// |psi><psi| / <psi|psi>.
  static DensityMatrix from_pure(const StateVector& psi);
  /// The maximally mixed state on dimension d.
  static DensityMatrix maximally_mixed(Index d);

  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  Spin spin() const { return Spin::from_pair_dim(dim()); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

enum class ElectronSpin { up = 0, down = 1 };

/// R[mu][nu], T[mu][nu]: d x d Kraus operators for a mediator incoming in nu
/// and detected in mu after reflection (R) or transmission (T).
struct KrausSet {
  std::array<std::array<ComplexMatrix, 2>, 2> reflect;
  std::array<std::array<ComplexMatrix, 2>, 2> transmit;
  std::optional<ModelConfig> config;

  const ComplexMatrix& R(ElectronSpin mu, ElectronSpin nu) const {
    return reflect[static_cast<int>(mu)][static_cast<int>(nu)];
  }
  const ComplexMatrix& T(ElectronSpin mu, ElectronSpin nu) const {
    return transmit[static_cast<int>(mu)][static_cast<int>(nu)];
  }
  Index dim() const { return reflect[0][0].rows(); }

  /// max over nu of |sum_mu (R^dag R + T^dag T) - I|.
  double completeness_deviation() const;
  /// Largest entry of R^mu_nu, T^mu_nu that fails to shift m12 by (nu - mu).
  double shift_rule_violation() const;
};

struct WeightedKraus {
  double weight;
  KrausSet kraus;
};

/// Convex mixture of channels: one KrausSet per sampled mediator wavevector.
struct KrausMixture {
  std::vector<WeightedKraus> components;

  static KrausMixture single(KrausSet kraus) { return {{{1.0, std::move(kraus)}}}; }
  Index dim() const { return components.front().kraus.dim(); }
  double completeness_deviation() const;
};

/// Slices r and t into d x d blocks by mediator in/out spin.
KrausSet extract_kraus(const ScatteringOperators& ops);

struct ElectronMixture {
  double p_up = 1.0;
  double p_down = 0.0;
};

/// Trace-preserving map sum_{mu,nu} rho_e,nunu (R rho R^dag + T rho T^dag).
/// Throws std::invalid_argument for an invalid electron mixture.
DensityMatrix apply_unconditioned(const KrausMixture& channel, ElectronMixture rho_e,
                                  const DensityMatrix& rho12);
DensityMatrix apply_unconditioned(const KrausSet& kraus, ElectronMixture rho_e,
                                  const DensityMatrix& rho12);

/// Post-selected step. `state` is empty when the branch probability is below
/// kVanishingProbability.
struct ChannelOutcome {
  std::optional<DensityMatrix> state;
  double probability = 0.0;

  bool defined() const { return state.has_value(); }
};

inline constexpr double kVanishingProbability = 1e-14;

ChannelOutcome apply_conditional(const KrausMixture& channel, ElectronSpin nu, ElectronSpin mu,
                                 const DensityMatrix& rho12);
ChannelOutcome apply_conditional(const KrausSet& kraus, ElectronSpin nu, ElectronSpin mu,
                                 const DensityMatrix& rho12);

/// How each mediator is prepared and filtered. No detection means the
/// unconditioned map (step probability 1).
struct ProtocolStep {
  ElectronSpin inject = ElectronSpin::up;
  std::optional<ElectronSpin> detect = ElectronSpin::up;
};

struct TrajectoryRecord {
  int n;
  DensityMatrix state;
  double fidelity;
  double cumulative_probability;
  double log_negativity;
  double purity;
  /// Probability of the n-th post-selection (1 for n = 0).
  double step_probability;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  /// Set when a post-selection branch vanished before reaching n.
  bool truncated = false;
};

/// Applies n protocol steps starting from rho0 and records metrics against
/// target after every step.
Trajectory iterate_protocol(const KrausMixture& channel, const DensityMatrix& rho0, int n,
                            const StateVector& target, ProtocolStep step = {});
Trajectory iterate_protocol(const KrausSet& kraus, const DensityMatrix& rho0, int n,
                            const StateVector& target, ProtocolStep step = {});

/// Channels solved on a uniform grid over +-3 sigma of a Gaussian in k with
/// weights normalized to one. Requires 0 < sigma_over_k < 0.2 and an odd
/// node count >= 3.
KrausMixture gaussian_k_kraus(const ModelConfig& config, double sigma_over_k, int nodes,
                              Execution exec = Execution::parallel);

/// Model parameters seen by a mediator with wavevector k (1 + delta).
ModelConfig config_at_relative_k(const ModelConfig& config, double delta);

/// Probability that an up mediator leaves down when the impurities start in
/// |s,s,s12,0>. Warns on std::clog when the channel is off resonance.
double flip_probability(const KrausSet& kraus, const CoupledBasisTransform& cb, int twice_s12);

}  // namespace spinflip
