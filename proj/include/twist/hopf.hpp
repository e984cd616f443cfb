#pragma once

// The commutative Hopf algebra O(G) underlying the twisting engine.
//
// G is presented by k torus variables x_1..x_k (invertible, grouplike:
// Delta x = x (x) x) and m filtered variables z_1..z_m with
//
//   Delta z_j = z_j (x) 1 + 1 (x) z_j + Z_j,
//
// where Z_j is a finite sum of pure tensors with counit-free legs.  In
// strict-unipotent mode the Z_j involve only lower-index z variables and
// respect the filtration degrees; extended mode also admits torus factors
// (e.g. the affine line bundle over the torus with Delta y = y (x) 1 +
// 1 (x) y + (x-1) (x) y).

#include <map>
#include <string>
#include <vector>

#include "twist/scalar.hpp"

namespace twist::hopf {

using scalars::ParamTable;
using scalars::Rat;
using scalars::Scalar;

// ---------------------------------------------------------------------------
// Monomial: x^alpha z^beta with alpha in Z^k, beta in N^m.
struct Monomial {
  std::vector<long> alpha;  // torus exponents, may be negative
  std::vector<long> beta;   // filtered exponents, nonnegative

  static Monomial one(int k, int m) {
    return Monomial{std::vector<long>(k, 0), std::vector<long>(m, 0)};
  }
  bool is_one() const;
  bool torus_only() const;
  Monomial operator*(const Monomial& o) const;
  // graded-lex on alpha (grade = sum of |alpha_i|), then graded-lex on beta
  int compare(const Monomial& o) const;
  bool operator==(const Monomial& o) const { return compare(o) == 0; }
  bool operator<(const Monomial& o) const { return compare(o) < 0; }
};

// ---------------------------------------------------------------------------
// Element: canonical Scalar-linear combination of Monomials (descending).
struct Element {
  std::vector<std::pair<Monomial, Scalar>> terms;

  static Element zero() { return {}; }
  static Element unit(int k, int m);
  static Element monomial(const Monomial& mon, const Scalar& c = Scalar(1));

  bool is_zero() const { return terms.empty(); }
  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;  // commutative product
  Element scaled(const Scalar& c) const;
  Element negated() const;
  bool operator==(const Element& o) const;
  void normalize();
};

// ---------------------------------------------------------------------------
// Tensor: n-leg Scalar-linear combination of Monomial tuples; leg count
// fixed per value.  Used for coproducts and Sweedler expansions.
struct TensorTerm {
  std::vector<Monomial> legs;
  Scalar coeff;
};

struct Tensor {
  int nlegs = 2;
  std::vector<TensorTerm> terms;

  static Tensor unit(int nlegs, int k, int m);
  bool is_zero() const { return terms.empty(); }
  Tensor operator+(const Tensor& o) const;
  Tensor operator-(const Tensor& o) const;
  Tensor operator*(const Tensor& o) const;  // legwise commutative product
  Tensor scaled(const Scalar& c) const;
  bool operator==(const Tensor& o) const;
  void normalize();
};

// ---------------------------------------------------------------------------
// GroupData: the presentation of O(G).
struct ZTerm {
  Element left, right;  // one pure tensor P' (x) P'' of a correction Z_j
};

struct GroupData {
  ParamTable params;
  std::vector<std::string> xnames;         // torus variables
  std::vector<std::string> znames;         // filtered variables
  std::vector<long> zdeg;                  // filtration degrees
  std::vector<std::vector<ZTerm>> zcorr;   // Z_j per filtered variable
  bool extended = false;                   // torus factors allowed in Z_j

  int k() const { return static_cast<int>(xnames.size()); }
  int m() const { return static_cast<int>(znames.size()); }
  long weight(const Monomial& mon) const;  // filtration weight of z part
  Monomial xgen(int i) const;              // x_i as a monomial
  Monomial zgen(int j) const;              // z_j as a monomial
  std::string monomial_str(const Monomial& mon) const;
  std::string element_str(const Element& e) const;
  std::string tensor_str(const Tensor& t) const;
};

// ---------------------------------------------------------------------------
// Validation: counit axiom, coassociativity, leg augmentation, filtration
// legality.  Failures carry a witness description instead of throwing.
struct ValidationReport {
  struct Failure {
    std::string axiom;
    std::string witness;
  };
  std::vector<Failure> failures;
  bool ok() const { return failures.empty(); }
};

ValidationReport validate_hopf(const GroupData& g);

// counit: evaluation at the identity (torus part -> 1, z part -> 0)
Scalar counit(const GroupData& g, const Element& e);
Scalar counit_monomial(const Monomial& mon);

Element commutative_product(const Element& a, const Element& b);

// All monomials with filtration weight <= maxw and every torus exponent in
// [lo, hi]; ordered ascending by the Monomial order.
std::vector<Monomial> enumerate_monomials(const GroupData& g, long maxw, long lo, long hi);

// ---------------------------------------------------------------------------
// EvalContext: memoized coproduct engine, confined to one task.
class EvalContext {
 public:
  explicit EvalContext(const GroupData& g) : g_(g) {}

  const GroupData& group() const { return g_; }

  Tensor coproduct(const Element& e);           // 2 legs
  Tensor iterated_coproduct(const Element& e, int n);  // n >= 1 legs
  const Tensor& monomial_coproduct(const Monomial& mon);

  // Replace one leg of a tensor by the coproduct of its monomial there.
  Tensor expand_leg(const Tensor& t, int leg);

 private:
  const GroupData& g_;
  std::map<Monomial, Tensor> memo_;
  Tensor zgen_coproduct(int j);
};

}  // namespace twist::hopf
