#include "spinflip/scattering.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <sstream>

namespace spinflip {

namespace {

constexpr double kSingularRcond = 1e-13;

void warn_coincident_once() {
  static std::atomic<bool> warned{false};
  if (!warned.exchange(true)) {
    std::clog << "spinflip: warning: k x0 = 0 places both impurities at the same point\n";
  }
}

struct Site {
  ComplexMatrix w;
  double phase;  // k x_i
};

// Amplitude blocks are ordered A_0, B_0, A_1, B_1, ..., A_N, B_N, with A_j the
// right-moving and B_j the left-moving amplitude in region j (N sites). Each
// site contributes two block rows. A_0 and B_N are the incoming amplitudes;
// all other blocks are unknown and sit contiguously in columns [D, (2N+1)D).
ComplexMatrix matching_coefficients(const std::vector<Site>& sites, Dispersion dispersion) {
  const Index dim = sites.front().w.rows();
  const auto n_sites = static_cast<Index>(sites.size());
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  ComplexMatrix c = ComplexMatrix::Zero(2 * n_sites * dim, 2 * (n_sites + 1) * dim);

  for (Index i = 0; i < n_sites; ++i) {
    const ComplexMatrix& w = sites[static_cast<std::size_t>(i)].w;
    const cplx p = std::exp(kI * sites[static_cast<std::size_t>(i)].phase);
    const cplx pb = std::conj(p);
    const Index row0 = 2 * i * dim;
    const Index row1 = row0 + dim;
    const Index al = 2 * i * dim, bl = al + dim, ar = bl + dim, br = ar + dim;

    if (dispersion == Dispersion::quadratic) {
      // psi continuous; psi'(x+) - psi'(x-) = 2k W psi(x).
      c.block(row0, ar, dim, dim) = p * id;
      c.block(row0, br, dim, dim) = pb * id;
      c.block(row0, al, dim, dim) = -p * id;
      c.block(row0, bl, dim, dim) = -pb * id;

      c.block(row1, ar, dim, dim) = p * (kI * id - 2.0 * w);
      c.block(row1, br, dim, dim) = pb * (-kI * id - 2.0 * w);
      c.block(row1, al, dim, dim) = -kI * p * id;
      c.block(row1, bl, dim, dim) = kI * pb * id;
    } else {
      // Chiral first-order equations; the field at the contact is the mean of
      // its one-sided limits, S = (phi_R(x-) + phi_R(x+) + phi_L(x-) + phi_L(x+)) / 2.
      //   phi_R(x+) - phi_R(x-) = -i W S,   phi_L(x+) - phi_L(x-) = +i W S.
      const ComplexMatrix half_w = 0.5 * kI * w;
      c.block(row0, ar, dim, dim) = p * (id + half_w);
      c.block(row0, al, dim, dim) = p * (-id + half_w);
      c.block(row0, bl, dim, dim) = pb * half_w;
      c.block(row0, br, dim, dim) = pb * half_w;

      c.block(row1, br, dim, dim) = pb * (id - half_w);
      c.block(row1, bl, dim, dim) = pb * (-id - half_w);
      c.block(row1, al, dim, dim) = -p * half_w;
      c.block(row1, ar, dim, dim) = -p * half_w;
    }
  }
  return c;
}

FullScattering solve_matching(const std::vector<Site>& sites, const ModelConfig& config) {
  const Index dim = sites.front().w.rows();
  const auto n_sites = static_cast<Index>(sites.size());
  const ComplexMatrix c = matching_coefficients(sites, config.dispersion);
  const Index unknowns = 2 * n_sites * dim;

  Eigen::PartialPivLU<ComplexMatrix> lu(c.middleCols(dim, unknowns));
  const double rcond = lu.rcond();
  if (!(rcond > kSingularRcond)) {
    std::ostringstream msg;
    msg << "singular matching system (rcond=" << rcond << ") for " << config.describe();
    throw ScatteringError(msg.str());
  }

  ComplexMatrix rhs(unknowns, 2 * dim);
  rhs.leftCols(dim) = -c.leftCols(dim);
  rhs.rightCols(dim) = -c.rightCols(dim);
  const ComplexMatrix x = lu.solve(rhs);

  FullScattering out;
  out.config = config;
  out.r_left = x.block(0, 0, dim, dim);
  out.t_left = x.block(unknowns - dim, 0, dim, dim);
  out.t_right = x.block(0, dim, dim, dim);
  out.r_right = x.block(unknowns - dim, dim, dim, dim);
  return out;
}

struct Eigenchannels {
  ComplexMatrix vectors;
  Eigen::VectorXd values;
};

Eigenchannels diagonalize(const ComplexMatrix& w) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(w);
  if (es.info() != Eigen::Success) throw ScatteringError("eigen-decomposition of W failed");
  return {es.eigenvectors(), es.eigenvalues()};
}

// f applied to the eigenvalues of a Hermitian W.
template <typename F>
ComplexMatrix spectral(const Eigenchannels& ec, F f) {
  Eigen::VectorXcd d(ec.values.size());
  for (Index j = 0; j < ec.values.size(); ++j) d(j) = f(ec.values(j));
  return ec.vectors * d.asDiagonal() * ec.vectors.adjoint();
}

}  // namespace

std::string to_string(CouplingKind kind) {
  return kind == CouplingKind::heisenberg ? "heisenberg" : "xy";
}
std::string to_string(Dispersion dispersion) {
  return dispersion == Dispersion::quadratic ? "quadratic" : "linear";
}
std::string to_string(MediatorSpin mediator) {
  return mediator == MediatorSpin::pauli ? "pauli" : "half";
}

ModelConfig ModelConfig::heisenberg(Spin s, double g, double kx0_over_pi) {
  ModelConfig c;
  c.s = s;
  c.coupling = {CouplingKind::heisenberg, {}};
  c.dispersion = Dispersion::quadratic;
  c.g = g;
  c.kx0_over_pi = kx0_over_pi;
  return c;
}

ModelConfig ModelConfig::xy(Spin s, double g, double kx0_over_pi) {
  ModelConfig c = heisenberg(s, g, kx0_over_pi);
  c.coupling.kind = CouplingKind::xy;
  c.dispersion = Dispersion::linear;
  return c;
}

ModelConfig ModelConfig::xy_rates(Spin s, std::vector<double> rates, double kx0_over_pi) {
  ModelConfig c = xy(s, 1.0, kx0_over_pi);
  c.coupling.rates = std::move(rates);
  return c;
}

void ModelConfig::validate() const {
  const bool heis = coupling.kind == CouplingKind::heisenberg;
  if (heis && dispersion != Dispersion::quadratic) {
    throw ConfigError("heisenberg coupling requires quadratic dispersion (electron)");
  }
  if (!heis && dispersion != Dispersion::linear) {
    throw ConfigError("xy coupling requires linear dispersion (photon)");
  }
  if (heis && !coupling.rates.empty()) {
    throw ConfigError("heisenberg coupling takes no transition rates");
  }
  if (!coupling.rates.empty()) {
    if (coupling.rates.size() != static_cast<std::size_t>(s.twice())) {
      throw ConfigError("xy rates: expected 2s=" + std::to_string(s.twice()) + " values, got " +
                        std::to_string(coupling.rates.size()));
    }
    for (double r : coupling.rates) {
      if (!std::isfinite(r) || r <= 0.0) throw ConfigError("xy rates must be finite and > 0");
    }
  } else if (!std::isfinite(g) || g < 0.0) {
    throw ConfigError("coupling g = J/v must be finite and >= 0");
  }
  if (!std::isfinite(kx0_over_pi) || kx0_over_pi < 0.0) {
    throw ConfigError("kx0_over_pi must be finite and >= 0");
  }
  if (kx0_over_pi == 0.0) warn_coincident_once();
}

bool ModelConfig::resonant(double tol) const {
  return std::abs(kx0_over_pi - std::round(kx0_over_pi)) <= tol;
}

std::vector<double> ModelConfig::effective_rates() const {
  if (!coupling.rates.empty()) return coupling.rates;
  std::vector<double> out;
  for (int tm = -s.twice(); tm <= s.twice() - 2; tm += 2) out.push_back(g * chi_rate(s, tm));
  return out;
}

std::string ModelConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "s=" << s.to_string() << " coupling=" << to_string(coupling.kind)
     << " dispersion=" << to_string(dispersion) << " mediator=" << to_string(mediator);
  if (coupling.rates.empty()) {
    os << " g=" << g;
  } else {
    os << " rates=[";
    for (std::size_t i = 0; i < coupling.rates.size(); ++i) {
      os << (i ? "," : "") << coupling.rates[i];
    }
    os << "]";
  }
  os << " kx0/pi=" << kx0_over_pi;
  return os.str();
}

ComplexMatrix FullScattering::s_matrix() const {
  const Index d = r_left.rows();
  ComplexMatrix s(2 * d, 2 * d);
  s << r_left, t_right, t_left, r_right;
  return s;
}

ComplexMatrix coupling_operator(const ModelConfig& config, int site) {
  config.validate();
  if (site != 1 && site != 2) throw std::invalid_argument("coupling_operator: site must be 1 or 2");
  const Spin s = config.s;
  const Slot slot = site == 1 ? Slot::imp1 : Slot::imp2;
  const auto e = make_spin_ops(Spin(1));
  const double scale = config.mediator == MediatorSpin::pauli ? 2.0 : 1.0;

  if (config.coupling.kind == CouplingKind::heisenberg) {
    const auto imp = make_spin_ops(s);
    const ComplexMatrix dot = embed(e.sx, Slot::electron, s) * embed(imp.sx, slot, s) +
                              embed(e.sy, Slot::electron, s) * embed(imp.sy, slot, s) +
                              embed(e.sz, Slot::electron, s) * embed(imp.sz, slot, s);
    return (scale * config.g) * dot;
  }

  const auto rates = config.effective_rates();
  ComplexMatrix raise = ComplexMatrix::Zero(s.dim(), s.dim());
  for (std::size_t j = 0; j < rates.size(); ++j) {
    const int tm = -s.twice() + 2 * static_cast<int>(j);
    raise(s.index_of(tm + 2), s.index_of(tm)) = rates[j];
  }
  const ComplexMatrix lower = raise.adjoint();
  // e.s_plus = |up><down|, the same matrix under either normalization.
  const ComplexMatrix flip = embed(e.s_plus, Slot::electron, s) * embed(lower, slot, s) +
                             embed(e.s_minus, Slot::electron, s) * embed(raise, slot, s);
  return (0.5 * scale) * flip;
}

ComplexMatrix joint_total_sz(Spin s) {
  const auto e = make_spin_ops(Spin(1));
  const auto imp = make_spin_ops(s);
  return embed(e.sz, Slot::electron, s) + embed(imp.sz, Slot::imp1, s) +
         embed(imp.sz, Slot::imp2, s);
}

FullScattering solve_two_impurity_full(const ModelConfig& config) {
  config.validate();
  const std::vector<Site> sites{{coupling_operator(config, 1), 0.0},
                                {coupling_operator(config, 2), kPi * config.kx0_over_pi}};
  return solve_matching(sites, config);
}

ScatteringOperators solve_two_impurity(const ModelConfig& config) {
  return solve_two_impurity_full(config).left();
}

ScatteringOperators solve_single_impurity_direct(const ModelConfig& config) {
  config.validate();
  return solve_matching({{coupling_operator(config, 1), 0.0}}, config).left();
}

ScatteringOperators solve_single_impurity_closed_form(const ModelConfig& config) {
  config.validate();
  // Per eigenchannel w of W the contact acts as a scalar barrier. Quadratic:
  // 1 + r = t and i(t - 1 + r) = 2 w t. Linear with the mean-value contact:
  // t - 1 = -i w S, -r = i w S, S = (1 + t + r)/2. Both give t = 1/(1 + i w).
  const auto ec = diagonalize(coupling_operator(config, 1));
  ScatteringOperators out;
  out.config = config;
  out.t = spectral(ec, [](double w) { return 1.0 / (1.0 + kI * w); });
  out.r = out.t - ComplexMatrix::Identity(out.t.rows(), out.t.cols());
  return out;
}

ComplexMatrix site_transfer_matrix(const ModelConfig& config, int site) {
  config.validate();
  const auto ec = diagonalize(coupling_operator(config, site));
  const ComplexMatrix t = spectral(ec, [](double w) { return 1.0 / (1.0 + kI * w); });
  const ComplexMatrix t_inv = spectral(ec, [](double w) { return 1.0 + kI * w; });
  const ComplexMatrix r = t - ComplexMatrix::Identity(t.rows(), t.cols());
  // A point contact is mirror symmetric, so r' = r and t' = t:
  //   M = [[t - r t^-1 r, r t^-1], [-t^-1 r, t^-1]].
  const Index d = t.rows();
  ComplexMatrix m(2 * d, 2 * d);
  m << t - r * t_inv * r, r * t_inv, -t_inv * r, t_inv;
  return m;
}

ScatteringOperators scattering_from_transfer(const ComplexMatrix& m, const ModelConfig& config) {
  const Index d = m.rows() / 2;
  Eigen::PartialPivLU<ComplexMatrix> lu(m.bottomRightCorner(d, d));
  const double rcond = lu.rcond();
  if (!(rcond > kSingularRcond)) {
    std::ostringstream msg;
    msg << "transfer matrix block M22 not invertible (rcond=" << rcond << ") for "
        << config.describe();
    throw ScatteringError(msg.str());
  }
  ScatteringOperators out;
  out.config = config;
  out.r = -lu.solve(m.bottomLeftCorner(d, d));
  out.t = m.topLeftCorner(d, d) + m.topRightCorner(d, d) * out.r;
  return out;
}

ScatteringOperators solve_via_transfer_matrices(const ModelConfig& config) {
  const ComplexMatrix m1 = site_transfer_matrix(config, 1);
  const ComplexMatrix m2 = site_transfer_matrix(config, 2);
  const Index d = m1.rows() / 2;
  // Site 2 sits at x0: local amplitudes are (e^{ikx0} A, e^{-ikx0} B).
  const cplx p = std::exp(kI * (kPi * config.kx0_over_pi));
  Eigen::VectorXcd shift(2 * d);
  shift.head(d).setConstant(p);
  shift.tail(d).setConstant(std::conj(p));
  const ComplexMatrix m2_global =
      shift.conjugate().asDiagonal() * m2 * shift.asDiagonal();
  return scattering_from_transfer(m2_global * m1, config);
}

double verify_unitarity(const ScatteringOperators& ops) {
  const Index d = ops.r.cols();
  return max_abs(ops.r.adjoint() * ops.r + ops.t.adjoint() * ops.t -
                 ComplexMatrix::Identity(d, d));
}

double selection_rule_violation(const ScatteringOperators& ops) {
  const Eigen::VectorXcd sz = joint_total_sz(ops.config.s).diagonal();
  double worst = 0.0;
  for (Index i = 0; i < ops.r.rows(); ++i) {
    for (Index j = 0; j < ops.r.cols(); ++j) {
      if (std::abs(sz(i) - sz(j)) < 0.25) continue;
      worst = std::max({worst, std::abs(ops.r(i, j)), std::abs(ops.t(i, j))});
    }
  }
  return worst;
}

double spin_squared_commutator(const ScatteringOperators& ops) {
  const ComplexMatrix s2 = kron(ComplexMatrix::Identity(2, 2), total_spin_squared(ops.config.s));
  return std::max(max_abs(ops.r * s2 - s2 * ops.r), max_abs(ops.t * s2 - s2 * ops.t));
}

}  // namespace spinflip
