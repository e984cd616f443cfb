#pragma once

// Exact scalar arithmetic for the twisting engine.
//
// A Scalar is a fraction of two "exponential polynomials": finite sums of
// terms  c * p1^e1*...*pd^ed * exp(l),  where c lies in the cyclotomic field
// Q(zeta_N), the p_i are declared generic parameters (polynomial powers), and
// l is a Q-linear form in the parameters' formal exponent symbols.  The term
// monoid is cancellative and ordered, so the fraction field is computable:
// gcd normalization runs over Q(zeta_N)[params][exponent lattice].
//
// Degenerate cases collapse to the familiar towers: no parameters and N = 1
// gives Q; N > 1 gives Q(zeta_N); parameters alone give rational functions.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twist/error.hpp"

namespace twist::scalars {

using Rat = mpq_class;
using Int = mpz_class;

std::string rat_str(const Rat& q);

// ---------------------------------------------------------------------------
// ParamTable: the declared generic parameters of a session.  Each parameter
// name doubles as its formal exponent symbol (exp(2*t) is a unit; t itself is
// a polynomial coefficient).  At most one cyclotomic order per session.
struct ParamTable {
  std::vector<std::string> names;
  long cyclotomic_order = 1;  // 1 means "no root of unity declared"

  int index_of(const std::string& name) const;
  void validate() const;
};

// ---------------------------------------------------------------------------
// LinForm: sparse Q-linear form in exponent-symbol indices.
struct LinForm {
  std::vector<std::pair<int, Rat>> terms;  // sorted by index, coefficients nonzero

  static LinForm symbol(int index);
  bool is_zero() const { return terms.empty(); }
  LinForm operator+(const LinForm& o) const;
  LinForm operator-(const LinForm& o) const;
  LinForm negated() const;
  LinForm scaled(const Rat& c) const;
  int compare(const LinForm& o) const;  // lexicographic; total order
  bool operator==(const LinForm& o) const { return compare(o) == 0; }
  std::string str(const ParamTable& pt) const;
};

// ---------------------------------------------------------------------------
// CycF: element of Q(zeta_n), a dense polynomial in zeta reduced modulo the
// n-th cyclotomic polynomial.  n = 1 encodes a plain rational.
class CycF {
 public:
  CycF() : n_(1), c_(1, Rat(0)) {}
  explicit CycF(const Rat& r) : n_(1), c_(1, r) {}
  explicit CycF(long v) : n_(1), c_(1, Rat(v)) {}
  static CycF zeta_pow(long n, long k);

  long order() const { return n_; }
  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  std::optional<Rat> as_rational() const;
  // k with this == zeta^k, if this is a power of zeta_n.
  std::optional<long> as_zeta_power() const;
  // dense coordinates over the power basis 1, zeta, ..., zeta^{deg-1}
  const std::vector<Rat>& coords() const { return c_; }

  CycF operator+(const CycF& o) const;
  CycF operator-(const CycF& o) const;
  CycF operator*(const CycF& o) const;
  CycF operator/(const CycF& o) const;  // throws DivisionByZero
  CycF negated() const;
  CycF inverse() const;

  int compare(const CycF& o) const;
  bool operator==(const CycF& o) const { return compare(o) == 0; }
  std::string str() const;  // "1", "-2/3", "zeta", "1 - zeta^2", ...

 private:
  long n_;
  std::vector<Rat> c_;  // size = deg(Phi_n), reduced mod Phi_n
  static void promote(CycF& a, CycF& b);
  void reduce(std::vector<Rat>& raw) const;
  friend struct CycFHash;
};

// Dense integer-coefficient cyclotomic polynomial Phi_n (cached).
const std::vector<Rat>& cyclotomic_poly(long n);

// ---------------------------------------------------------------------------
// EMonom: the monomial part of an exponential-polynomial term.
struct EMonom {
  std::vector<std::pair<int, long>> pexp;  // parameter powers >= 1, sorted by index
  LinForm eform;                           // formal exponent linear form

  bool is_one() const { return pexp.empty() && eform.is_zero(); }
  EMonom operator*(const EMonom& o) const;
  // Divides only the exponential part and whatever parameter powers cancel;
  // caller must ensure parameter divisibility (checked, throws Internal).
  EMonom divided_by(const EMonom& o) const;
  bool param_divisible_by(const EMonom& o) const;
  int compare(const EMonom& o) const;  // graded-lex on pexp, then eform lex
  bool operator==(const EMonom& o) const { return compare(o) == 0; }
};

struct ETerm {
  EMonom mon;
  CycF coeff;
};

// EPoly: canonical sorted term list (descending monomial order, no zeros).
struct EPoly {
  std::vector<ETerm> terms;

  static EPoly zero() { return {}; }
  static EPoly constant(const CycF& c);
  bool is_zero() const { return terms.empty(); }
  bool is_constant() const;
  EPoly operator+(const EPoly& o) const;
  EPoly operator-(const EPoly& o) const;
  EPoly operator*(const EPoly& o) const;
  EPoly negated() const;
  bool operator==(const EPoly& o) const;
  void normalize();  // sort, merge, drop zeros
  std::string str(const ParamTable& pt) const;
};

// ---------------------------------------------------------------------------
// ExpUnit: an invertible scalar exp(l) * zeta_order^root.
struct ExpUnit {
  LinForm exponent;
  long order = 1;  // cyclotomic order (1 = none)
  long root = 0;   // in [0, order)

  static ExpUnit one() { return {}; }
  ExpUnit operator*(const ExpUnit& o) const;
  ExpUnit pow(long n) const;
  // Rational power; fails (SchemaError) if the root part does not admit it.
  ExpUnit pow(const Rat& r) const;
  ExpUnit inverse() const { return pow(-1L); }
  bool is_one() const;
  bool operator==(const ExpUnit& o) const;
  std::string str(const ParamTable& pt) const;
};

// ---------------------------------------------------------------------------
// Scalar: fraction num/den of EPoly, den nonzero, kept normalized.
class Scalar {
 public:
  Scalar() : num_(), den_(EPoly::constant(CycF(1))) {}
  Scalar(long v);
  explicit Scalar(const Rat& r);
  explicit Scalar(const CycF& c);
  static Scalar param(int index);          // the polynomial coefficient symbol
  static Scalar unit(const ExpUnit& u);    // exp(form) * zeta^k
  static Scalar zeta(long order, long k = 1);

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;  // throws DivisionByZero
  Scalar negated() const;
  Scalar inverse() const;
  Scalar pow(long n) const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  std::optional<Rat> as_rational() const;
  std::optional<ExpUnit> as_unit() const;
  // Linear polynomial in the parameters with zero constant term, as a form
  // suitable for exponentiation (exp(value) representable).  nullopt if not.
  std::optional<LinForm> as_exponent_form() const;
  // Coordinates of the scalar over an internally chosen Q-basis of its terms;
  // used to turn linear conditions over scalars into rational systems.
  const EPoly& numerator() const { return num_; }
  const EPoly& denominator() const { return den_; }

  std::string str(const ParamTable& pt) const;

 private:
  EPoly num_, den_;
  void normalize();
};

inline Scalar operator*(long a, const Scalar& s) { return Scalar(a) * s; }

// gcd of two exponential polynomials (up to unit), exposed for tests.
EPoly epoly_gcd(const EPoly& a, const EPoly& b);

}  // namespace twist::scalars
