#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spinflip/common.hpp"

namespace spinflip {

/// A positive spin quantum number s, stored as the integer 2s.
class Spin {
 public:
  /// Throws std::invalid_argument unless twice_value >= 1.
  explicit Spin(int twice_value);

  /// Parses "3/2", "1", "2" or "0.5"-free rational text. Only denominators
  /// 1 and 2 are accepted.
  static Spin parse(std::string_view text);

  /// Recovers s from the dimension (2s+1)^2 of the two-impurity space.
  static Spin from_pair_dim(Index pair_dim);

  int twice() const { return twice_; }
  double value() const { return 0.5 * twice_; }
  Index dim() const { return twice_ + 1; }
  Index pair_dim() const { return dim() * dim(); }
  /// 2 (2s+1)^2: mediator spin times both impurities.
  Index joint_dim() const { return 2 * pair_dim(); }

  /// Basis position of the magnetic quantum number m = twice_m / 2 (m descending).
  Index index_of(int twice_m) const;
  /// Magnetic quantum number (times two) at basis position i.
  int twice_m_at(Index i) const { return twice_ - 2 * static_cast<int>(i); }

  std::string to_string() const;

  friend bool operator==(Spin, Spin) = default;

 private:
  int twice_;
};

/// Parses a signed half-integer ("-3/2", "1", "0") and returns twice its value.
int parse_twice_half_integer(std::string_view text);
/// Formats a twice-valued half-integer as "3/2", "-1", "0".
std::string format_half_integer(int twice_value);

struct SpinOperators {
  Spin s;
  ComplexMatrix sx, sy, sz, s_plus, s_minus;
};

/// Spin-s matrices in the |s,m> basis ordered m = s, s-1, ..., -s.
SpinOperators make_spin_ops(Spin s);

enum class Slot { electron, imp1, imp2 };

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Embeds a single-slot operator into the joint space electron (x) imp1 (x) imp2.
/// Throws std::invalid_argument if op does not match the slot dimension.
ComplexMatrix embed(const ComplexMatrix& op, Slot slot, Spin s);

/// Embeds a single-impurity operator into the two-impurity space imp1 (x) imp2.
ComplexMatrix embed_pair(const ComplexMatrix& op, int site, Spin s);

/// S12^2 = (S1 + S2)^2 on the two-impurity space.
ComplexMatrix total_spin_squared(Spin s);
/// S12z = S1z + S2z on the two-impurity space.
ComplexMatrix total_spin_z(Spin s);

struct CoupledLabel {
  int twice_s12;
  int twice_m12;
};

/// Columns of u are the coupled states |s,s,s12,m12>, ordered by s12
/// descending and then m12 descending, expanded in the product basis.
struct CoupledBasisTransform {
  Spin s;
  ComplexMatrix u;
  std::vector<CoupledLabel> labels;

  /// Column index of |s12,m12>; throws std::out_of_range if absent.
  Index column(int twice_s12, int twice_m12) const;
  StateVector state(int twice_s12, int twice_m12) const { return u.col(column(twice_s12, twice_m12)); }
};

/// Builds the coupled basis with Condon-Shortley phases by lowering from
/// each highest-weight state.
CoupledBasisTransform coupled_basis(Spin s);

/// |m1, m2> in the two-impurity product basis.
StateVector product_state(Spin s, int twice_m1, int twice_m2);

/// sum_m (-1)^(s-m) |m,-m> / sqrt(2s+1).
StateVector singlet_state(Spin s);

/// chi_{s,m} = sqrt(s(s+1) - m(m+1)) for -s <= m <= s-1.
double chi_rate(Spin s, int twice_m);

}  // namespace spinflip
