#include "twist/lie.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace twist::lie {

using hopf::EvalContext;
using hopf::TensorTerm;

// ---------------------------------------------------------------------------
// Derivations.

Derivation Derivation::zero(const GroupData& g, std::string name, bool toral) {
  Derivation d;
  d.name = std::move(name);
  d.toral = toral;
  d.on_x.assign(g.k(), Element::zero());
  d.on_z.assign(g.m(), Element::zero());
  return d;
}

Element apply_derivation(const GroupData& g, const Derivation& d, const Monomial& mon) {
  Element out = Element::zero();
  for (int i = 0; i < g.k(); ++i) {
    if (mon.alpha[i] == 0 || d.on_x[i].is_zero()) continue;
    Monomial rest = mon;
    rest.alpha[i] -= 1;
    out = out + (Element::monomial(rest, Scalar(mon.alpha[i])) * d.on_x[i]);
  }
  for (int j = 0; j < g.m(); ++j) {
    if (mon.beta[j] == 0 || d.on_z[j].is_zero()) continue;
    Monomial rest = mon;
    rest.beta[j] -= 1;
    out = out + (Element::monomial(rest, Scalar(mon.beta[j])) * d.on_z[j]);
  }
  return out;
}

Element apply_derivation(const GroupData& g, const Derivation& d, const Element& e) {
  Element out = Element::zero();
  for (const auto& [mon, c] : e.terms)
    out = out + apply_derivation(g, d, mon).scaled(c);
  return out;
}

Tensor apply_derivation_leg(const GroupData& g, const Derivation& d, const Tensor& t,
                            int leg) {
  Tensor out;
  out.nlegs = t.nlegs;
  for (const auto& term : t.terms) {
    Element image = apply_derivation(g, d, term.legs[leg]);
    for (const auto& [mon, c] : image.terms) {
      TensorTerm nt = term;
      nt.legs[leg] = mon;
      nt.coeff = term.coeff * c;
      out.terms.push_back(std::move(nt));
    }
  }
  out.normalize();
  return out;
}

namespace {

// D(gen) = c * gen for some scalar c (possibly zero)?
bool eigen_on(const Element& image, const Monomial& gen, Scalar* eigen) {
  if (image.is_zero()) {
    if (eigen) *eigen = Scalar(0);
    return true;
  }
  if (image.terms.size() != 1 || !(image.terms[0].first == gen)) return false;
  if (eigen) *eigen = image.terms[0].second;
  return true;
}

}  // namespace

bool check_derivation_tag(const GroupData& g, const Derivation& d) {
  if (static_cast<int>(d.on_x.size()) != g.k()) return false;
  if (static_cast<int>(d.on_z.size()) != g.m()) return false;
  if (d.toral) {
    for (int i = 0; i < g.k(); ++i)
      if (!eigen_on(d.on_x[i], g.xgen(i), nullptr)) return false;
    for (int j = 0; j < g.m(); ++j)
      if (!eigen_on(d.on_z[j], g.zgen(j), nullptr)) return false;
    return true;
  }
  // Locally nilpotent: kills the torus variables and strictly lowers the
  // filtration weight of every z variable, so iterated application of the
  // derivation terminates on any element.
  for (int i = 0; i < g.k(); ++i)
    if (!d.on_x[i].is_zero()) return false;
  for (int j = 0; j < g.m(); ++j)
    for (const auto& [mon, c] : d.on_z[j].terms)
      if (g.weight(mon) >= g.zdeg[j]) return false;
  return true;
}

Scalar toral_eigenvalue(const GroupData& g, const Derivation& d, const Monomial& mon) {
  Scalar total(0);
  for (int i = 0; i < g.k(); ++i) {
    if (mon.alpha[i] == 0) continue;
    Scalar c;
    if (!eigen_on(d.on_x[i], g.xgen(i), &c))
      fail(Err::SchemaError, "derivation " + d.name + " is not toral on " + g.xnames[i]);
    total += Scalar(mon.alpha[i]) * c;
  }
  for (int j = 0; j < g.m(); ++j) {
    if (mon.beta[j] == 0) continue;
    Scalar c;
    if (!eigen_on(d.on_z[j], g.zgen(j), &c))
      fail(Err::SchemaError, "derivation " + d.name + " is not toral on " + g.znames[j]);
    total += Scalar(mon.beta[j]) * c;
  }
  return total;
}

bool check_left_invariant(const GroupData& g, const Derivation& d) {
  EvalContext ctx(g);
  auto holds_on = [&](const Monomial& gen) {
    Element e = Element::monomial(gen);
    Tensor lhs = ctx.coproduct(apply_derivation(g, d, e));
    Tensor rhs = apply_derivation_leg(g, d, ctx.coproduct(e), 1);
    return lhs == rhs;
  };
  for (int i = 0; i < g.k(); ++i)
    if (!holds_on(g.xgen(i))) return false;
  for (int j = 0; j < g.m(); ++j)
    if (!holds_on(g.zgen(j))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Structure constants.

LieAlgebra LieAlgebra::abelian(std::vector<std::string> names) {
  LieAlgebra l;
  l.basis = std::move(names);
  const int n = l.dim();
  l.c.assign(n, std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n, Scalar(0))));
  return l;
}

void LieAlgebra::set_bracket(int a, int b, int e, const Scalar& v) {
  c[a][b][e] = v;
  c[b][a][e] = v.negated();
}

std::vector<Scalar> LieAlgebra::bracket(const std::vector<Scalar>& u,
                                        const std::vector<Scalar>& v) const {
  const int n = dim();
  std::vector<Scalar> out(n, Scalar(0));
  for (int a = 0; a < n; ++a) {
    if (u[a].is_zero()) continue;
    for (int b = 0; b < n; ++b) {
      if (v[b].is_zero()) continue;
      Scalar f = u[a] * v[b];
      for (int e = 0; e < n; ++e)
        if (!c[a][b][e].is_zero()) out[e] += f * c[a][b][e];
    }
  }
  return out;
}

bool check_jacobi(const LieAlgebra& l) {
  const int n = l.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < n; ++e)
        if (!(l.c[a][b][e] + l.c[b][a][e]).is_zero()) return false;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int g = b + 1; g < n; ++g)
        for (int e = 0; e < n; ++e) {
          Scalar sum(0);
          for (int d = 0; d < n; ++d)
            sum += l.c[a][b][d] * l.c[d][g][e] + l.c[g][a][d] * l.c[d][b][e] +
                   l.c[b][g][d] * l.c[d][a][e];
          if (!sum.is_zero()) return false;
        }
  return true;
}

bool check_realization(const GroupData& g, const LieAlgebra& l,
                       const std::vector<Derivation>& ds) {
  const int n = l.dim();
  if (static_cast<int>(ds.size()) != n) return false;
  std::vector<Monomial> gens;
  for (int i = 0; i < g.k(); ++i) gens.push_back(g.xgen(i));
  for (int j = 0; j < g.m(); ++j) gens.push_back(g.zgen(j));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (const Monomial& gen : gens) {
        Element lhs = apply_derivation(g, ds[a], apply_derivation(g, ds[b], gen)) -
                      apply_derivation(g, ds[b], apply_derivation(g, ds[a], gen));
        Element rhs = Element::zero();
        for (int e = 0; e < n; ++e)
          if (!l.c[a][b][e].is_zero())
            rhs = rhs + apply_derivation(g, ds[e], gen).scaled(l.c[a][b][e]);
        if (!(lhs == rhs)) return false;
      }
  return true;
}

// ---------------------------------------------------------------------------
// Bivectors and the Yang-Baxter defect.

Bivector Bivector::zero(int n) {
  Bivector b;
  b.r.assign(n, std::vector<Scalar>(n, Scalar(0)));
  return b;
}

void Bivector::add_wedge(int a, int b, const Scalar& v) {
  r[a][b] += v;
  r[b][a] -= v;
}

bool Bivector::antisymmetric() const {
  const int n = dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!(r[a][b] + r[b][a]).is_zero()) return false;
  return true;
}

bool Bivector::operator==(const Bivector& o) const {
  if (dim() != o.dim()) return false;
  for (int a = 0; a < dim(); ++a)
    for (int b = 0; b < dim(); ++b)
      if (!(r[a][b] == o.r[a][b])) return false;
  return true;
}

namespace {

// Coefficient of D_x (x) D_y (x) D_z in [r12,r13] + [r12,r23] + [r13,r23].
Scalar cybe_entry(const LieAlgebra& l, const Bivector& r, int x, int y, int z) {
  const int n = l.dim();
  Scalar sum(0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!l.c[a][b][x].is_zero()) sum += r.r[a][y] * r.r[b][z] * l.c[a][b][x];
      if (!l.c[a][b][y].is_zero()) sum += r.r[x][a] * r.r[b][z] * l.c[a][b][y];
      if (!l.c[a][b][z].is_zero()) sum += r.r[x][a] * r.r[y][b] * l.c[a][b][z];
    }
  return sum;
}

CybeReport collect_cybe(std::vector<Scalar>&& tensor, int n) {
  CybeReport rep;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        Scalar& v = tensor[(x * n + y) * n + z];
        if (!v.is_zero()) rep.violations.emplace_back(x, y, z, std::move(v));
      }
  rep.ok = rep.violations.empty();
  return rep;
}

}  // namespace

CybeReport cybe_check_serial(const LieAlgebra& l, const Bivector& r) {
  const int n = l.dim();
  std::vector<Scalar> tensor(static_cast<size_t>(n) * n * n, Scalar(0));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) tensor[(x * n + y) * n + z] = cybe_entry(l, r, x, y, z);
  return collect_cybe(std::move(tensor), n);
}

CybeReport cybe_check(const LieAlgebra& l, const Bivector& r) {
  const int n = l.dim();
  std::vector<Scalar> tensor(static_cast<size_t>(n) * n * n, Scalar(0));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int flat = 0; flat < n * n * n; ++flat) {
    int x = flat / (n * n), y = (flat / n) % n, z = flat % n;
    tensor[flat] = cybe_entry(l, r, x, y, z);
  }
  return collect_cybe(std::move(tensor), n);
}

SymplecticReport symplectic_check(const SkewForm& w, const LieAlgebra& l) {
  SymplecticReport rep;
  rep.rank = linalg::rank(w.w);
  rep.is_2cocycle = true;
  const int n = l.dim();
  for (int a = 0; a < n && rep.is_2cocycle; ++a)
    for (int b = a + 1; b < n && rep.is_2cocycle; ++b)
      for (int c = b + 1; c < n && rep.is_2cocycle; ++c) {
        Scalar sum(0);
        for (int e = 0; e < n; ++e)
          sum += l.c[a][b][e] * w.w[e][c] + l.c[c][a][e] * w.w[e][b] +
                 l.c[b][c][e] * w.w[e][a];
        if (!sum.is_zero()) rep.is_2cocycle = false;
      }
  return rep;
}

// ---------------------------------------------------------------------------
// Support inversion.

SupportedForm invert_bivector(const Bivector& r) {
  if (!r.antisymmetric()) fail(Err::SchemaError, "bivector is not antisymmetric");
  SupportedForm out;
  linalg::Matrix rows = r.r;
  std::vector<int> pivots = linalg::rref(rows);
  const size_t s = pivots.size();
  if (s % 2 != 0) fail(Err::Internal, "antisymmetric matrix with odd rank");
  out.basis = std::move(rows);
  // In the echelon basis u_a (pivot columns p_a) the bivector's matrix is
  // the principal submatrix of r at the pivot columns; the inverse form is
  // its matrix inverse.
  linalg::Matrix sub(s, std::vector<Scalar>(s, Scalar(0)));
  for (size_t a = 0; a < s; ++a)
    for (size_t b = 0; b < s; ++b) sub[a][b] = r.r[pivots[a]][pivots[b]];
  out.omega.w = linalg::inverse(sub);
  return out;
}

Bivector bivector_from_form(const SupportedForm& f, int n) {
  Bivector out = Bivector::zero(n);
  const size_t s = f.basis.size();
  if (s == 0) return out;
  linalg::Matrix rho = linalg::inverse(f.omega.w);
  for (size_t a = 0; a < s; ++a)
    for (size_t b = 0; b < s; ++b) {
      if (rho[a][b].is_zero()) continue;
      for (int p = 0; p < n; ++p) {
        if (f.basis[a][p].is_zero()) continue;
        for (int q = 0; q < n; ++q)
          out.r[p][q] += f.basis[a][p] * rho[a][b] * f.basis[b][q];
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Toral/nilpotent block decomposition.

bool CybeDecomposition::ok() const {
  if (!split_ok) return false;
  for (bool v : centralizer_ok)
    if (!v) return false;
  return true;
}

CybeDecomposition prop54_decompose(const LieAlgebra& l, const Bivector& r,
                                   const std::vector<int>& t_idx,
                                   const std::vector<int>& u_idx) {
  const int n = l.dim();
  CybeDecomposition out;
  out.s = Bivector::zero(n);
  out.r_u = Bivector::zero(n);

  std::vector<int> seen(n, 0);
  for (int i : t_idx)
    if (i >= 0 && i < n) ++seen[i];
  for (int j : u_idx)
    if (j >= 0 && j < n) ++seen[j];
  bool partition = std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }) &&
                   static_cast<int>(t_idx.size() + u_idx.size()) == n;

  out.split_ok = partition;
  if (partition) {
    // The toral part must be abelian and must commute with the nilpotent part.
    for (int a : t_idx)
      for (int b : t_idx)
        for (int e = 0; e < n; ++e)
          if (!l.c[a][b][e].is_zero()) out.split_ok = false;
    for (int a : t_idx)
      for (int b : u_idx)
        for (int e = 0; e < n; ++e)
          if (!l.c[a][b][e].is_zero()) out.split_ok = false;
  }
  if (!partition) return out;

  for (int a : t_idx)
    for (int b : t_idx) out.s.r[a][b] = r.r[a][b];
  for (int a : u_idx)
    for (int b : u_idx) out.r_u.r[a][b] = r.r[a][b];
  for (int a : t_idx) {
    CybeDecomposition::WTerm term;
    term.t_index = a;
    term.u_coeffs.reserve(u_idx.size());
    bool nonzero = false;
    for (int b : u_idx) {
      term.u_coeffs.push_back(r.r[a][b]);
      nonzero = nonzero || !r.r[a][b].is_zero();
    }
    if (nonzero) out.w.push_back(std::move(term));
  }

  // Each nilpotent leg u_i must centralize r_u:
  // [u_i (x) 1 + 1 (x) u_i, r_u] = 0.
  for (const auto& term : out.w) {
    std::vector<Scalar> u(n, Scalar(0));
    for (size_t j = 0; j < u_idx.size(); ++j) u[u_idx[j]] = term.u_coeffs[j];
    std::vector<std::vector<Scalar>> bra(n);
    for (int a = 0; a < n; ++a) {
      std::vector<Scalar> ea(n, Scalar(0));
      ea[a] = Scalar(1);
      bra[a] = l.bracket(u, ea);
    }
    bool good = true;
    for (int x = 0; x < n && good; ++x)
      for (int y = 0; y < n && good; ++y) {
        Scalar sum(0);
        for (int a = 0; a < n; ++a) {
          if (!out.r_u.r[a][y].is_zero()) sum += bra[a][x] * out.r_u.r[a][y];
          if (!out.r_u.r[x][a].is_zero()) sum += out.r_u.r[x][a] * bra[a][y];
        }
        if (!sum.is_zero()) good = false;
      }
    out.centralizer_ok.push_back(good);
  }
  return out;
}

}  // namespace twist::lie
