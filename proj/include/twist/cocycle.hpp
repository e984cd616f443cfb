#pragma once

// Evaluable 2-cocycle functionals J: O(G) (x) O(G) -> Scalar.
//
// Four descriptions are supported:
//   * Bicharacter      - a k x k matrix of units pairing the torus part,
//                        extended by the counit on filtered variables;
//   * ExpBivector      - exp(sign * r) for a bivector r realized by
//                        pairwise commuting tagged derivations (toral legs
//                        pair into closed-form exponential units, nilpotent
//                        legs into terminating series);
//   * ExplicitSeries   - a term list/generator sum_n c_n (L_n (x) R_n)
//                        evaluated through the counit, with a declared
//                        termination variable bounding each evaluation;
//   * Convolution      - a product J_1 * ... * J_s under the convolution
//                        (J*K)(f,g) = sum J(f_1,g_1) K(f_2,g_2).
//
// Evaluation happens inside a CocycleContext, which owns the memo tables
// and validates the description on construction.

#include <functional>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "twist/hopf.hpp"
#include "twist/lie.hpp"

namespace twist::cocycle {

using hopf::Element;
using hopf::GroupData;
using hopf::Monomial;
using scalars::ExpUnit;
using scalars::Rat;
using scalars::Scalar;

// ---------------------------------------------------------------------------
// Descriptions.

struct Bicharacter {
  std::vector<std::vector<ExpUnit>> mat;  // k x k; J(x^a, x^b) = prod mat[i][j]^(a_i b_j)
};

struct ExpBivector {
  lie::Bivector r;                   // over the derivation list below
  std::vector<lie::Derivation> gens;
  Rat sign = Rat(1);                 // exponent multiplier: +-1 or +-1/2
};

// One factor of an operator word: D_op + shift * id.
struct OpFactor {
  int op = 0;
  Scalar shift;
};
using OpWord = std::vector<OpFactor>;

struct SeriesTerm {
  Scalar coeff;
  OpWord left, right;
};

struct ExplicitSeries {
  std::vector<lie::Derivation> ops;
  // n-th term of the series, or nullopt past the end of a finite list.
  std::function<std::optional<SeriesTerm>(int)> term;
  // Index of the filtered variable whose consumption by the right words
  // bounds every evaluation: the n-th right word must annihilate (through
  // the counit) anything with fewer than n copies of it.
  int termination_z = 0;
};

struct Cocycle;
struct Convolution {
  std::vector<Cocycle> factors;  // empty product = counit (x) counit
};

struct Cocycle {
  std::variant<Bicharacter, ExpBivector, ExplicitSeries, Convolution> v;

  static Cocycle trivial() { return Cocycle{Convolution{}}; }
};

// Convolution product; flattens nested convolutions.
Cocycle convolve(const Cocycle& a, const Cocycle& b);

// The series cocycle sum_n (h^n / n!) X(X-1)...(X-n+1) (x) Y^n on the
// extended Borel group (torus variable x, filtered y), with X = x d/dx,
// Y = x d/dy and h the given parameter; termination variable y.
Cocycle borel_builtin(const GroupData& g, int hparam);

// ---------------------------------------------------------------------------
// Evaluation context: memo tables plus admission checks.

class CocycleContext {
 public:
  // Validates the description: matrix shape, verified derivation tags,
  // abelian support with pairwise commuting derivations (ExpBivector),
  // counit first term and termination probes (ExplicitSeries).
  CocycleContext(const GroupData& g, const Cocycle& j);

  const GroupData& group() const { return g_; }
  hopf::EvalContext& coalgebra() { return hctx_; }
  const Cocycle& description() const { return j_; }

  Scalar eval_J(const Element& f, const Element& h);
  Scalar eval_Jinv(const Element& f, const Element& h);
  Scalar eval_Q(const Element& f, const Element& h);   // J(f,h) - J(h,f)
  Scalar eval_RJ(const Element& f, const Element& h);  // (J_21^{-1} * J)(f,h)

  Scalar J_mon(const Monomial& u, const Monomial& v);
  Scalar Jinv_mon(const Monomial& u, const Monomial& v);

 private:
  const GroupData& g_;
  Cocycle j_;
  hopf::EvalContext hctx_;
  std::map<std::pair<Monomial, Monomial>, Scalar> memo_j_, memo_jinv_;

  void validate(const Cocycle& c);
  Scalar eval_direct(const Cocycle& c, const Monomial& u, const Monomial& v);
  Scalar eval_bichar(const Bicharacter& b, const Monomial& u, const Monomial& v,
                     bool inverse);
  Scalar eval_expbivector(const ExpBivector& e, const Monomial& u, const Monomial& v,
                          bool inverse);
  Scalar eval_series(const ExplicitSeries& s, const Monomial& u, const Monomial& v);
  Scalar eval_convolution(const Convolution& c, const Monomial& u, const Monomial& v);
  Scalar jinv_triangular(const Monomial& u, const Monomial& v);
};

// ---------------------------------------------------------------------------
// Degree-bounded verification of the cocycle axiom
//   sum J(a_1 b_1, c) J(a_2, b_2) = sum J(a, b_1 c_1) J(b_2, c_2)
// plus the normalization J(f,1) = counit(f) = J(1,f), over all monomial
// triples of total filtration weight <= degree with torus exponents in
// [box_lo, box_hi].

struct AxiomViolation {
  std::string kind;  // "normalization" or "cocycle"
  std::vector<Monomial> mons;
  Scalar lhs, rhs;
};

struct AxiomReport {
  long triples_checked = 0;
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
};

struct CheckOptions {
  int degree = 3;
  long box_lo = -1;
  long box_hi = 1;
  bool parallel = true;  // serial path kept as reference
};

AxiomReport cocycle_axiom_check(const GroupData& g, const Cocycle& j,
                                const CheckOptions& opts);

}  // namespace twist::cocycle
