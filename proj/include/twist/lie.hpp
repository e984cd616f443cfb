#pragma once

// Lie-algebra layer: derivations of the coordinate ring with verified
// toral / locally nilpotent tags, structure constants with exact axiom
// checks, classical r-matrices (bivectors) with the Yang-Baxter defect
// tensor, skew forms with symplectic/2-cocycle checks, bivector inversion
// on its support, and the toral/unipotent block decomposition of an
// r-matrix over a split basis.

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "twist/hopf.hpp"
#include "twist/linalg.hpp"

namespace twist::lie {

using hopf::Element;
using hopf::GroupData;
using hopf::Monomial;
using hopf::Tensor;
using scalars::Scalar;

// A derivation of O(G), given by its value on each generator and extended
// by the Leibniz rule.  `toral` means every generator is an eigenvector;
// otherwise the derivation must kill the torus generators and strictly
// lower the filtration weight of each z generator (locally nilpotent).
struct Derivation {
  std::string name;
  bool toral = false;
  std::vector<Element> on_x;  // value on x_1..x_k
  std::vector<Element> on_z;  // value on z_1..z_m

  static Derivation zero(const GroupData& g, std::string name, bool toral);
};

Element apply_derivation(const GroupData& g, const Derivation& d, const Monomial& mon);
Element apply_derivation(const GroupData& g, const Derivation& d, const Element& e);
// Apply d to one tensor leg, id elsewhere.
Tensor apply_derivation_leg(const GroupData& g, const Derivation& d, const Tensor& t, int leg);

// Verify the declared tag on every generator (see Derivation).
bool check_derivation_tag(const GroupData& g, const Derivation& d);
// Eigenvalue of a toral derivation on a monomial; requires the tag to hold.
Scalar toral_eigenvalue(const GroupData& g, const Derivation& d, const Monomial& mon);

// True iff Delta(d f) == (id (x) d)(Delta f) on every generator; this
// suffices because both sides are multiplicative in f.
bool check_left_invariant(const GroupData& g, const Derivation& d);

// Structure constants c[a][b][e]: [D_a, D_b] = sum_e c[a][b][e] D_e.
struct LieAlgebra {
  std::vector<std::string> basis;
  std::vector<std::vector<std::vector<Scalar>>> c;

  static LieAlgebra abelian(std::vector<std::string> names);
  int dim() const { return static_cast<int>(basis.size()); }
  // Record [D_a, D_b] ∋ v * D_e together with the antisymmetric mirror.
  void set_bracket(int a, int b, int e, const Scalar& v);
  std::vector<Scalar> bracket(const std::vector<Scalar>& u,
                              const std::vector<Scalar>& v) const;
};

// Antisymmetry plus the Jacobi identity on all basis triples.
bool check_jacobi(const LieAlgebra& l);

// The derivations realize the structure constants: [d_a, d_b] agrees with
// sum_e c[a][b][e] d_e on every generator of O(G).
bool check_realization(const GroupData& g, const LieAlgebra& l,
                       const std::vector<Derivation>& ds);

// Antisymmetric matrix r_ab over the Lie algebra basis, r = sum r_ab D_a (x) D_b.
struct Bivector {
  std::vector<std::vector<Scalar>> r;

  static Bivector zero(int n);
  int dim() const { return static_cast<int>(r.size()); }
  // Add v * (D_a ^ D_b), i.e. r_ab += v and r_ba -= v.
  void add_wedge(int a, int b, const Scalar& v);
  bool antisymmetric() const;
  bool operator==(const Bivector& o) const;
};

// Classical Yang-Baxter defect [r12,r13] + [r12,r23] + [r13,r23] as a
// coordinate tensor; ok iff every entry vanishes.
struct CybeReport {
  bool ok = true;
  std::vector<std::tuple<int, int, int, Scalar>> violations;
};
CybeReport cybe_check(const LieAlgebra& l, const Bivector& r);
// Serial reference implementation (cross-checked in tests and benchmarks).
CybeReport cybe_check_serial(const LieAlgebra& l, const Bivector& r);

// Skew form on the Lie algebra basis.
struct SkewForm {
  std::vector<std::vector<Scalar>> w;
};
struct SymplecticReport {
  int rank = 0;
  bool is_2cocycle = false;  // w([u,v],t) + w([t,u],v) + w([v,t],u) = 0
};
SymplecticReport symplectic_check(const SkewForm& w, const LieAlgebra& l);

// Inverse form of a bivector on its support (the row span of r).  `basis`
// holds the support basis as rows in Lie-algebra coordinates (reduced
// echelon form), and `omega` is the inverse form in that basis.
struct SupportedForm {
  std::vector<std::vector<Scalar>> basis;
  SkewForm omega;
};
SupportedForm invert_bivector(const Bivector& r);
// Reassemble the bivector sum_{a,b} inverse(omega)_ab v_a (x) v_b on the
// ambient algebra; invert_bivector followed by this is the identity.
Bivector bivector_from_form(const SupportedForm& f, int n);

// Block decomposition of r over a basis split into toral and nilpotent
// parts: r = s + w + r_u with s the toral-toral block, w the mixed block
// as a list of (toral index, nilpotent coefficient vector) pairs, and r_u
// the nilpotent-nilpotent block.  The split must have an abelian toral
// part commuting with the nilpotent part, and each nilpotent leg u_i of w
// must centralize r_u: [u_i (x) 1 + 1 (x) u_i, r_u] = 0.
struct CybeDecomposition {
  struct WTerm {
    int t_index = 0;
    std::vector<Scalar> u_coeffs;  // over the nilpotent sub-basis
  };
  Bivector s;       // full-size, toral-toral entries only
  Bivector r_u;     // full-size, nilpotent-nilpotent entries only
  std::vector<WTerm> w;
  bool split_ok = false;
  std::vector<bool> centralizer_ok;  // one verdict per w term

  bool ok() const;
};
CybeDecomposition prop54_decompose(const LieAlgebra& l, const Bivector& r,
                                   const std::vector<int>& t_idx,
                                   const std::vector<int>& u_idx);

}  // namespace twist::lie
