#include "spinflip/spin_algebra.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace spinflip {

namespace {

int parse_int(std::string_view text) {
  int value = 0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Spin::Spin(int twice_value) : twice_(twice_value) {
  if (twice_value < 1) {
    throw std::invalid_argument("spin must be a positive half-integer, got 2s=" +
                                std::to_string(twice_value));
  }
}

Spin Spin::parse(std::string_view text) { return Spin(parse_twice_half_integer(text)); }

Spin Spin::from_pair_dim(Index pair_dim) {
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(pair_dim))));
  if (n < 2 || n * n != pair_dim) {
    throw std::invalid_argument("dimension " + std::to_string(pair_dim) +
                                " is not (2s+1)^2 for a positive spin");
  }
  return Spin(static_cast<int>(n - 1));
}

Index Spin::index_of(int twice_m) const {
  if (twice_m > twice_ || twice_m < -twice_ || (twice_ - twice_m) % 2 != 0) {
    throw std::out_of_range("m=" + format_half_integer(twice_m) + " invalid for s=" + to_string());
  }
  return (twice_ - twice_m) / 2;
}

std::string Spin::to_string() const { return format_half_integer(twice_); }

int parse_twice_half_integer(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return 2 * parse_int(text);
  const int num = parse_int(text.substr(0, slash));
  const int den = parse_int(text.substr(slash + 1));
  if (den == 1) return 2 * num;
  if (den == 2) return num;
  throw std::invalid_argument("not a half-integer: '" + std::string(text) + "'");
}

std::string format_half_integer(int twice_value) {
  if (twice_value % 2 == 0) return std::to_string(twice_value / 2);
  return std::to_string(twice_value) + "/2";
}

SpinOperators make_spin_ops(Spin s) {
  const Index n = s.dim();
  const double sv = s.value();
  SpinOperators ops{s, {}, {}, {}, {}, {}};
  ops.sz = ComplexMatrix::Zero(n, n);
  ops.s_plus = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const double m = 0.5 * s.twice_m_at(i);
    ops.sz(i, i) = m;
    // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, and |m+1> sits one row above.
    if (i > 0) ops.s_plus(i - 1, i) = std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
  }
  ops.s_minus = ops.s_plus.adjoint();
  ops.sx = 0.5 * (ops.s_plus + ops.s_minus);
  ops.sy = (-0.5 * kI) * (ops.s_plus - ops.s_minus);
  return ops;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, Slot slot, Spin s) {
  const Index n = s.dim();
  const Index expected = slot == Slot::electron ? 2 : n;
  if (op.rows() != expected || op.cols() != expected) {
    throw std::invalid_argument("embed: operator is " + std::to_string(op.rows()) + "x" +
                                std::to_string(op.cols()) + ", slot expects " +
                                std::to_string(expected));
  }
  const ComplexMatrix id_e = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix id_n = ComplexMatrix::Identity(n, n);
  switch (slot) {
    case Slot::electron:
      return kron(op, ComplexMatrix::Identity(n * n, n * n));
    case Slot::imp1:
      return kron(id_e, kron(op, id_n));
    case Slot::imp2:
      return kron(id_e, kron(id_n, op));
  }
  throw std::logic_error("unreachable slot");
}

ComplexMatrix embed_pair(const ComplexMatrix& op, int site, Spin s) {
  const Index n = s.dim();
  if (op.rows() != n || op.cols() != n) {
    throw std::invalid_argument("embed_pair: operator dimension does not match 2s+1");
  }
  const ComplexMatrix id_n = ComplexMatrix::Identity(n, n);
  if (site == 1) return kron(op, id_n);
  if (site == 2) return kron(id_n, op);
  throw std::invalid_argument("embed_pair: site must be 1 or 2");
}

ComplexMatrix total_spin_squared(Spin s) {
  const auto ops = make_spin_ops(s);
  const ComplexMatrix x = embed_pair(ops.sx, 1, s) + embed_pair(ops.sx, 2, s);
  const ComplexMatrix y = embed_pair(ops.sy, 1, s) + embed_pair(ops.sy, 2, s);
  const ComplexMatrix z = embed_pair(ops.sz, 1, s) + embed_pair(ops.sz, 2, s);
  return x * x + y * y + z * z;
}

ComplexMatrix total_spin_z(Spin s) {
  const auto ops = make_spin_ops(s);
  return embed_pair(ops.sz, 1, s) + embed_pair(ops.sz, 2, s);
}

Index CoupledBasisTransform::column(int twice_s12, int twice_m12) const {
  for (std::size_t c = 0; c < labels.size(); ++c) {
    if (labels[c].twice_s12 == twice_s12 && labels[c].twice_m12 == twice_m12) {
      return static_cast<Index>(c);
    }
  }
  throw std::out_of_range("no coupled state with s12=" + format_half_integer(twice_s12) +
                          ", m12=" + format_half_integer(twice_m12));
}

StateVector product_state(Spin s, int twice_m1, int twice_m2) {
  StateVector v = StateVector::Zero(s.pair_dim());
  v(s.index_of(twice_m1) * s.dim() + s.index_of(twice_m2)) = 1.0;
  return v;
}

CoupledBasisTransform coupled_basis(Spin s) {
  const Index d = s.pair_dim();
  const auto ops = make_spin_ops(s);
  const ComplexMatrix lower = embed_pair(ops.s_minus, 1, s) + embed_pair(ops.s_minus, 2, s);

  CoupledBasisTransform cb{s, ComplexMatrix::Zero(d, d), {}};
  cb.labels.reserve(static_cast<std::size_t>(d));
  Index col = 0;
  for (int ts12 = 2 * s.twice(); ts12 >= 0; ts12 -= 2) {
    // Highest weight |s12, m12=s12>: the unit vector in the m12 = s12 sector
    // orthogonal to every state already built there.
    StateVector top = StateVector::Zero(d);
    double best = -1.0;
    for (int tm1 = s.twice(); tm1 >= ts12 - s.twice(); tm1 -= 2) {
      StateVector cand = product_state(s, tm1, ts12 - tm1);
      for (Index c = 0; c < col; ++c) {
        if (cb.labels[static_cast<std::size_t>(c)].twice_m12 != ts12) continue;
        cand -= cb.u.col(c) * cb.u.col(c).dot(cand);
      }
      const double norm = cand.norm();
      if (norm > best + 1e-12) {
        best = norm;
        top = cand / norm;
      }
    }
    // Phase: positive real coefficient on |m1=s, m2=s12-s>.
    const cplx anchor = top(s.index_of(s.twice()) * s.dim() + s.index_of(ts12 - s.twice()));
    top *= std::abs(anchor) / anchor;

    StateVector state = top;
    for (int tm12 = ts12; tm12 >= -ts12; tm12 -= 2) {
      cb.u.col(col) = state;
      cb.labels.push_back({ts12, tm12});
      ++col;
      if (tm12 > -ts12) {
        const double j = 0.5 * ts12;
        const double m = 0.5 * tm12;
        state = lower * state / std::sqrt(j * (j + 1.0) - m * (m - 1.0));
      }
    }
  }
  return cb;
}

StateVector singlet_state(Spin s) {
  StateVector v = StateVector::Zero(s.pair_dim());
  const double norm = 1.0 / std::sqrt(static_cast<double>(s.dim()));
  for (Index i = 0; i < s.dim(); ++i) {
    const int tm = s.twice_m_at(i);
    // (s - m) is an integer; its parity fixes the sign.
    const double sign = ((s.twice() - tm) / 2) % 2 == 0 ? 1.0 : -1.0;
    v(i * s.dim() + s.index_of(-tm)) = sign * norm;
  }
  return v;
}

double chi_rate(Spin s, int twice_m) {
  if (twice_m < -s.twice() || twice_m > s.twice() - 2 || (s.twice() - twice_m) % 2 != 0) {
    throw std::out_of_range("chi_rate: m=" + format_half_integer(twice_m) +
                            " outside [-s, s-1] for s=" + s.to_string());
  }
  const double sv = s.value();
  const double m = 0.5 * twice_m;
  return std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
}

}  // namespace spinflip
