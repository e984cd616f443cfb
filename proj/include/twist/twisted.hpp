#pragma once

// Twisted multiplication on O(G) and the resulting noncommutative algebra.
//
// A 2-cocycle J deforms the commutative product in three standard ways:
//
//   right twist      f * h = sum f1 h1 J(f2, h2)
//   left twist       f * h = sum J^{-1}(f1, h1) f2 h2
//   two-sided twist  f * h = sum J^{-1}(f1, h1) f2 h2 J(f3, h3)
//
// all expressed in the commutative basis of O(G).  The right twist turns
// O(G) into a noncommutative algebra presented by commutation relations
// between the generators; derive_presentation computes those relations in
// closed form and re-verifies each one against the product itself.  On top
// of the presentation sits a rewriting engine that brings free words in the
// generators (and inverse torus generators) into the unique normal form
//
//   x^alpha z^beta   (torus block left, variables in declared order),
//
// realizing the algebra as an iterated Ore extension.

#include <string>
#include <vector>

#include "twist/cocycle.hpp"

namespace twist::twistalg {

using cocycle::Cocycle;
using cocycle::CocycleContext;
using hopf::Element;
using hopf::GroupData;
using hopf::Monomial;
using scalars::Scalar;

Element twisted_product(CocycleContext& ctx, const Element& f, const Element& h);
Element left_twisted_product(CocycleContext& ctx, const Element& f, const Element& h);
Element twisted_hopf_product(CocycleContext& ctx, const Element& f, const Element& h);

// ---------------------------------------------------------------------------
// TwistedElement: Scalar-linear combination of normal words.  The Monomial
// container doubles as the word key: x^alpha z^beta stands for the ordered
// product of the torus block and the filtered letters, not the commutative
// monomial.  expand_normal translates back to the commutative basis.
struct TwistedElement {
  Element rep;

  static TwistedElement zero() { return {}; }
  static TwistedElement one(const GroupData& g);
  static TwistedElement word(const Monomial& mon, const Scalar& c = Scalar(1));

  bool is_zero() const { return rep.is_zero(); }
  TwistedElement operator+(const TwistedElement& o) const { return {rep + o.rep}; }
  TwistedElement operator-(const TwistedElement& o) const { return {rep - o.rep}; }
  TwistedElement scaled(const Scalar& c) const { return {rep.scaled(c)}; }
  TwistedElement negated() const { return {rep.negated()}; }
  bool operator==(const TwistedElement& o) const { return rep == o.rep; }
};

// One letter of a free word: a torus variable with an integer power or a
// filtered variable with a nonnegative power.
struct Letter {
  bool torus = true;
  int index = 0;
  long power = 1;
};
using Word = std::vector<Letter>;

// ---------------------------------------------------------------------------
// Commutation presentation of the twisted algebra:
//
//   x_i x_j = lambda[i][j] x_j x_i
//   x_i z_j = (z_j + p[i][j]) x_i
//   z_i z_j = z_j z_i + C[i][j]
//
// p and C are stored in the commutative basis (as the defining formulas
// produce them) and again as normal words (pw, Cw), ready for rewriting.
struct Presentation {
  GroupData g;
  std::vector<std::vector<Scalar>> lambda;     // k x k
  std::vector<std::vector<Element>> p;         // k x m
  std::vector<std::vector<Element>> C;         // m x m, antisymmetric
  std::vector<std::vector<TwistedElement>> pw;
  std::vector<std::vector<TwistedElement>> Cw;

  // one relation per line, plain ASCII
  std::string relations_str() const;
};

// Computes the presentation from the cocycle and re-verifies every relation
// against the twisted product (two independent computation paths).  Errors:
// FiltrationViolation if some C[i][j] escapes the subalgebra generated by
// the lower filtered variables in strict mode; SchemaError if a torus
// variable pairs nontrivially with itself (the normal-word basis needs
// J(x_i^a, x_i^b) = 1).
Presentation derive_presentation(CocycleContext& ctx);

// Iterated twisted product of the letters of a normal word: the torus block
// as one monomial, then each filtered letter in order.
Element expand_word(CocycleContext& ctx, const Monomial& word);
Element expand_normal(CocycleContext& ctx, const TwistedElement& t);

// Inverse of expand_normal: triangular elimination down the filtration.
TwistedElement to_normal(CocycleContext& ctx, const Element& v);

// Rewrites a free word into normal form using only the presentation data.
TwistedElement normal_form(const Word& w, const Presentation& P);

// Product and commutator of normal forms under the same rewriting engine.
TwistedElement nf_mul(const TwistedElement& a, const TwistedElement& b,
                      const Presentation& P);
TwistedElement commutator(const TwistedElement& a, const TwistedElement& b,
                          const Presentation& P);

}  // namespace twist::twistalg
