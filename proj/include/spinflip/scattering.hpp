#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "spinflip/common.hpp"
#include "spinflip/spin_algebra.hpp"

namespace spinflip {

enum class CouplingKind { heisenberg, xy };
enum class Dispersion { quadratic, linear };

/// Normalization of the mediator spin in the contact coupling. `pauli` uses
/// sigma with eigenvalues +-1; `half` uses the spin-1/2 operators sigma/2.
/// The reported J/v values of the electron and photon setups correspond to
/// `half`; `pauli` at coupling g is the same physics as `half` at 2g.
enum class MediatorSpin { pauli, half };

struct CouplingModel {
  CouplingKind kind = CouplingKind::heisenberg;
  /// XY only: J_{s,m}/v for m = -s, ..., s-1. Empty means the isotropic
  /// pattern g * chi_{s,m}.
  std::vector<double> rates;
};

/// Thrown for inconsistent or out-of-range model parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a matching or transfer-matrix system is singular.
class ScatteringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelConfig {
  Spin s{1};
  CouplingModel coupling;
  Dispersion dispersion = Dispersion::quadratic;
  /// Dimensionless J/v. Ignored by XY with explicit rates.
  double g = 1.0;
  /// k x0 / pi.
  double kx0_over_pi = 1.0;
  MediatorSpin mediator = MediatorSpin::half;

  static ModelConfig heisenberg(Spin s, double g, double kx0_over_pi);
  static ModelConfig xy(Spin s, double g, double kx0_over_pi);
  static ModelConfig xy_rates(Spin s, std::vector<double> rates, double kx0_over_pi);

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
  /// k x0 / pi within tol of an integer.
  bool resonant(double tol = 1e-9) const;
  /// J_{s,m}/v for m = -s, ..., s-1 (XY only).
  std::vector<double> effective_rates() const;
  std::string describe() const;
};

std::string to_string(CouplingKind kind);
std::string to_string(Dispersion dispersion);
std::string to_string(MediatorSpin mediator);

/// r and t act on the joint space electron (x) imp1 (x) imp2; column index is
/// the incident channel, row index the outgoing one.
struct ScatteringOperators {
  ComplexMatrix r;
  ComplexMatrix t;
  ModelConfig config;
};

/// Both incidence directions. `s_matrix()` maps incoming (left, right)
/// amplitudes to outgoing (left, right).
struct FullScattering {
  ComplexMatrix r_left, t_left, r_right, t_right;
  ModelConfig config;

  ComplexMatrix s_matrix() const;
  ScatteringOperators left() const { return {r_left, t_left, config}; }
};

/// Dimensionless contact-coupling operator W_i of impurity `site` on the
/// joint space, coupling strength included: g sigma.S_i (Heisenberg) or
/// sigma+ S_i- + sigma- S_i+ with S_i+ = sum_m J_{s,m}/v |m+1><m| (XY),
/// scaled by 1/2 under MediatorSpin::half. Hermitian.
ComplexMatrix coupling_operator(const ModelConfig& config, int site);

/// Total S_z = sigma_z/2 + S1z + S2z on the joint space.
ComplexMatrix joint_total_sz(Spin s);

/// Direct solution of the matching conditions at both impurities
/// (left incidence).
ScatteringOperators solve_two_impurity(const ModelConfig& config);

/// Direct solution for both incidence directions from one factorization.
FullScattering solve_two_impurity_full(const ModelConfig& config);

/// Direct matching solve with only impurity 1 present (at x = 0).
ScatteringOperators solve_single_impurity_direct(const ModelConfig& config);

/// Eigenchannel formula t_w = 1/(1 + i w), r_w = t_w - 1 applied to the
/// eigen-decomposition of W_1; impurity 2 absent.
ScatteringOperators solve_single_impurity_closed_form(const ModelConfig& config);

/// Transfer matrix of one impurity located at the origin, built from its
/// closed-form amplitudes. Acts on (right-moving, left-moving) amplitudes.
ComplexMatrix site_transfer_matrix(const ModelConfig& config, int site);

/// Converts a 2D x 2D transfer matrix to left-incidence r, t.
ScatteringOperators scattering_from_transfer(const ComplexMatrix& m, const ModelConfig& config);

/// Composes both site transfer matrices with free propagation over k x0.
ScatteringOperators solve_via_transfer_matrices(const ModelConfig& config);

/// max |r^dag r + t^dag t - I|.
double verify_unitarity(const ScatteringOperators& ops);

/// Largest |entry| of r or t that connects channels of different total S_z.
double selection_rule_violation(const ScatteringOperators& ops);

/// Largest entry of [r, S12^2] and [t, S12^2].
double spin_squared_commutator(const ScatteringOperators& ops);

}  // namespace spinflip
