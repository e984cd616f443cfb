#include "twist/cocycle.hpp"

#include <algorithm>
#include <array>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace twist::cocycle {

using hopf::counit;
using hopf::counit_monomial;
using hopf::Tensor;
using lie::apply_derivation;
using lie::apply_derivation_leg;
using lie::check_derivation_tag;
using lie::toral_eigenvalue;

namespace {

Rat inv_factorial(long n) {
  Rat f(1);
  for (long i = 2; i <= n; ++i) f *= i;
  return Rat(1) / f;
}

// exp of a scalar that must be a pure parameter form.
Scalar scalar_exp(const Scalar& s) {
  if (s.is_zero()) return Scalar(1);
  auto form = s.as_exponent_form();
  if (!form)
    fail(Err::SchemaError, "toral pairing exponent is not exponentiable in closed form");
  return Scalar::unit(ExpUnit{*form, 1, 0});
}

Element word_apply(const GroupData& g, const std::vector<lie::Derivation>& ops,
                   const OpWord& word, const Monomial& mon) {
  Element e = Element::monomial(mon);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    Element next = apply_derivation(g, ops[it->op], e);
    if (!it->shift.is_zero()) next = next + e.scaled(it->shift);
    e = std::move(next);
    if (e.is_zero()) break;
  }
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction helpers.

Cocycle convolve(const Cocycle& a, const Cocycle& b) {
  Convolution out;
  if (const auto* ca = std::get_if<Convolution>(&a.v))
    out.factors = ca->factors;
  else
    out.factors.push_back(a);
  if (const auto* cb = std::get_if<Convolution>(&b.v))
    out.factors.insert(out.factors.end(), cb->factors.begin(), cb->factors.end());
  else
    out.factors.push_back(b);
  return Cocycle{std::move(out)};
}

Cocycle borel_builtin(const GroupData& g, int hparam) {
  if (g.k() != 1 || g.m() != 1 || !g.extended)
    fail(Err::SchemaError, "the series cocycle needs the extended x,y group");
  ExplicitSeries s;
  lie::Derivation X = lie::Derivation::zero(g, "X", true);
  X.on_x[0] = Element::monomial(g.xgen(0));
  lie::Derivation Y = lie::Derivation::zero(g, "Y", false);
  Y.on_z[0] = Element::monomial(g.xgen(0));
  s.ops = {std::move(X), std::move(Y)};
  s.termination_z = 0;
  Scalar h = Scalar::param(hparam);
  s.term = [h](int n) -> std::optional<SeriesTerm> {
    SeriesTerm t;
    t.coeff = h.pow(n) * Scalar(inv_factorial(n));
    for (int i = 0; i < n; ++i) {
      t.left.push_back(OpFactor{0, Scalar(-i)});
      t.right.push_back(OpFactor{1, Scalar(0)});
    }
    return t;
  };
  return Cocycle{std::move(s)};
}

// ---------------------------------------------------------------------------
// Context and admission checks.

CocycleContext::CocycleContext(const GroupData& g, const Cocycle& j)
    : g_(g), j_(j), hctx_(g) {
  validate(j_);
}

void CocycleContext::validate(const Cocycle& c) {
  if (const auto* b = std::get_if<Bicharacter>(&c.v)) {
    if (static_cast<int>(b->mat.size()) != g_.k())
      fail(Err::SchemaError, "bicharacter matrix does not match the torus rank");
    for (const auto& row : b->mat)
      if (static_cast<int>(row.size()) != g_.k())
        fail(Err::SchemaError, "bicharacter matrix is not square");
    return;
  }
  if (const auto* e = std::get_if<ExpBivector>(&c.v)) {
    const int n = e->r.dim();
    if (n != static_cast<int>(e->gens.size()))
      fail(Err::SchemaError, "bivector size does not match the derivation list");
    if (!e->r.antisymmetric()) fail(Err::SchemaError, "bivector is not antisymmetric");
    Rat half = Rat(1) / 2;
    if (!(e->sign == Rat(1) || e->sign == Rat(-1) || e->sign == half || e->sign == -half))
      fail(Err::SchemaError, "exponential multiplier must be +-1 or +-1/2");
    for (const auto& d : e->gens)
      if (!check_derivation_tag(g_, d))
        fail(Err::SchemaError, "derivation " + d.name + " does not match its tag");
    // Support = rows of r that occur; must act by pairwise commuting
    // derivations so the exponential factors split.
    std::vector<int> support;
    for (int a = 0; a < n; ++a)
      for (int b2 = 0; b2 < n; ++b2)
        if (!e->r.r[a][b2].is_zero()) {
          support.push_back(a);
          break;
        }
    std::vector<Monomial> gens;
    for (int i = 0; i < g_.k(); ++i) gens.push_back(g_.xgen(i));
    for (int j2 = 0; j2 < g_.m(); ++j2) gens.push_back(g_.zgen(j2));
    for (size_t p = 0; p < support.size(); ++p)
      for (size_t q = p + 1; q < support.size(); ++q) {
        const lie::Derivation& da = e->gens[support[p]];
        const lie::Derivation& db = e->gens[support[q]];
        for (const Monomial& mon : gens) {
          Element comm = apply_derivation(g_, da, apply_derivation(g_, db, mon)) -
                         apply_derivation(g_, db, apply_derivation(g_, da, mon));
          if (!comm.is_zero())
            fail(Err::CentralizerViolation,
                 "support derivations " + da.name + ", " + db.name + " do not commute");
        }
      }
    // Left invariance makes convolution of the induced functionals agree
    // with operator composition, which the exponential evaluation uses.
    for (int a : support)
      if (!lie::check_left_invariant(g_, e->gens[a]))
        fail(Err::SchemaError,
             "support derivation " + e->gens[a].name + " is not left invariant");
    return;
  }
  if (const auto* s = std::get_if<ExplicitSeries>(&c.v)) {
    if (!s->term) fail(Err::SchemaError, "series cocycle has no term generator");
    if (s->termination_z < 0 || s->termination_z >= g_.m())
      fail(Err::SchemaError, "termination variable out of range");
    for (const auto& d : s->ops)
      if (!check_derivation_tag(g_, d))
        fail(Err::SchemaError, "derivation " + d.name + " does not match its tag");
    auto t0 = s->term(0);
    if (!t0 || !t0->coeff.is_one() || !t0->left.empty() || !t0->right.empty())
      fail(Err::SchemaError, "series must start with the counit term");
    // Termination probe on generators: the n-th right word has to kill
    // anything carrying fewer than n copies of the termination variable.
    std::vector<Monomial> gens;
    for (int i = 0; i < g_.k(); ++i) gens.push_back(g_.xgen(i));
    for (int j2 = 0; j2 < g_.m(); ++j2) gens.push_back(g_.zgen(j2));
    for (int n = 1; n <= 3; ++n) {
      auto t = s->term(n);
      if (!t) break;
      for (const Monomial& gen : gens) {
        if (gen.beta[s->termination_z] >= n) continue;
        Scalar v = counit(g_, word_apply(g_, s->ops, t->right, gen));
        if (!v.is_zero())
          fail(Err::NonTerminatingSeries,
               "right word " + std::to_string(n) +
                   " does not consume the termination variable on " +
                   g_.monomial_str(gen));
      }
    }
    return;
  }
  for (const Cocycle& f : std::get<Convolution>(c.v).factors) validate(f);
}

// ---------------------------------------------------------------------------
// Variant evaluation.

Scalar CocycleContext::eval_bichar(const Bicharacter& b, const Monomial& u,
                                   const Monomial& v, bool inverse) {
  for (long e : u.beta)
    if (e != 0) return Scalar(0);
  for (long e : v.beta)
    if (e != 0) return Scalar(0);
  ExpUnit acc = ExpUnit::one();
  for (int i = 0; i < g_.k(); ++i) {
    if (u.alpha[i] == 0) continue;
    for (int j = 0; j < g_.k(); ++j) {
      if (v.alpha[j] == 0) continue;
      long e = u.alpha[i] * v.alpha[j];
      acc = acc * b.mat[i][j].pow(inverse ? -e : e);
    }
  }
  return Scalar::unit(acc);
}

Scalar CocycleContext::eval_expbivector(const ExpBivector& e, const Monomial& u,
                                        const Monomial& v, bool inverse) {
  const int n = e.r.dim();
  Rat sign = inverse ? -e.sign : e.sign;
  Tensor t;
  t.nlegs = 2;
  t.terms.push_back({{u, v}, Scalar(1)});

  // Factors with a nilpotent leg: terminating exponential series.
  const long guard = g_.weight(u) + g_.weight(v) + 2;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || e.r.r[a][b].is_zero()) continue;
      if (e.gens[a].toral && e.gens[b].toral) continue;
      Scalar c = Scalar(sign) * e.r.r[a][b];
      Tensor acc = t, cur = t;
      for (long step = 1;; ++step) {
        cur = apply_derivation_leg(g_, e.gens[b],
                                   apply_derivation_leg(g_, e.gens[a], cur, 0), 1);
        if (cur.is_zero()) break;
        if (step > guard) fail(Err::NonTerminatingSeries, "exponential series runaway");
        acc = acc + cur.scaled(c.pow(step) * Scalar(inv_factorial(step)));
      }
      t = std::move(acc);
    }

  // Toral-toral factors act on each monomial pair by an exponential unit of
  // the eigenvalue pairing; then evaluate both legs at the identity.
  Scalar total(0);
  for (const auto& term : t.terms) {
    Scalar base = counit_monomial(term.legs[0]) * counit_monomial(term.legs[1]);
    if (base.is_zero()) continue;
    Scalar expo(0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b || e.r.r[a][b].is_zero()) continue;
        if (!(e.gens[a].toral && e.gens[b].toral)) continue;
        Scalar pair = toral_eigenvalue(g_, e.gens[a], term.legs[0]) *
                      toral_eigenvalue(g_, e.gens[b], term.legs[1]);
        if (!pair.is_zero()) expo += Scalar(sign) * e.r.r[a][b] * pair;
      }
    total += term.coeff * base * scalar_exp(expo);
  }
  return total;
}

Scalar CocycleContext::eval_series(const ExplicitSeries& s, const Monomial& u,
                                   const Monomial& v) {
  const long bound = v.beta[s.termination_z];
  Scalar total(0);
  for (int n = 0;; ++n) {
    auto t = s.term(n);
    if (!t) break;
    Scalar val = t->coeff * counit(g_, word_apply(g_, s.ops, t->left, u)) *
                 counit(g_, word_apply(g_, s.ops, t->right, v));
    if (n > bound) {
      // One-term witness past the declared consumption bound.
      if (!val.is_zero())
        fail(Err::NonTerminatingSeries,
             "series term " + std::to_string(n) + " survives on (" +
                 g_.monomial_str(u) + ", " + g_.monomial_str(v) + ")");
      break;
    }
    total += val;
  }
  return total;
}

Scalar CocycleContext::eval_convolution(const Convolution& c, const Monomial& u,
                                        const Monomial& v) {
  const int s = static_cast<int>(c.factors.size());
  if (s == 0) return counit_monomial(u) * counit_monomial(v);
  Tensor tu = hctx_.iterated_coproduct(Element::monomial(u), s);
  Tensor tv = hctx_.iterated_coproduct(Element::monomial(v), s);
  Scalar total(0);
  for (const auto& a : tu.terms)
    for (const auto& b : tv.terms) {
      Scalar val = a.coeff * b.coeff;
      for (int i = 0; i < s && !val.is_zero(); ++i)
        val *= eval_direct(c.factors[i], a.legs[i], b.legs[i]);
      total += val;
    }
  return total;
}

Scalar CocycleContext::eval_direct(const Cocycle& c, const Monomial& u,
                                   const Monomial& v) {
  if (const auto* b = std::get_if<Bicharacter>(&c.v)) return eval_bichar(*b, u, v, false);
  if (const auto* e = std::get_if<ExpBivector>(&c.v))
    return eval_expbivector(*e, u, v, false);
  if (const auto* s = std::get_if<ExplicitSeries>(&c.v)) return eval_series(*s, u, v);
  return eval_convolution(std::get<Convolution>(c.v), u, v);
}

Scalar CocycleContext::J_mon(const Monomial& u, const Monomial& v) {
  auto key = std::make_pair(u, v);
  auto it = memo_j_.find(key);
  if (it != memo_j_.end()) return it->second;
  Scalar val = eval_direct(j_, u, v);
  memo_j_.emplace(std::move(key), val);
  return val;
}

// Triangular convolution solve: J^{-1}(u,v) is pinned by
//   sum J^{-1}(u_1,v_1) J(u_2,v_2) = counit(u) counit(v).
// Left legs reproduce u (resp. v) only in the diagonal terms, whose
// companions are torus monomials; every other Sweedler pair has strictly
// smaller total filtration weight, so the recursion terminates.
Scalar CocycleContext::jinv_triangular(const Monomial& u, const Monomial& v) {
  Tensor du = hctx_.monomial_coproduct(u);
  Tensor dv = hctx_.monomial_coproduct(v);
  Scalar diag(0);
  Scalar sum(0);
  for (const auto& a : du.terms)
    for (const auto& b : dv.terms) {
      if (a.legs[0] == u && b.legs[0] == v) {
        diag += a.coeff * b.coeff * J_mon(a.legs[1], b.legs[1]);
        continue;
      }
      Scalar val = a.coeff * b.coeff * Jinv_mon(a.legs[0], b.legs[0]) *
                   J_mon(a.legs[1], b.legs[1]);
      sum += val;
    }
  if (diag.is_zero())
    fail(Err::InverseNotFound, "diagonal coefficient for J^{-1}(" +
                                   g_.monomial_str(u) + ", " + g_.monomial_str(v) +
                                   ") vanishes");
  return (counit_monomial(u) * counit_monomial(v) - sum) / diag;
}

Scalar CocycleContext::Jinv_mon(const Monomial& u, const Monomial& v) {
  auto key = std::make_pair(u, v);
  auto it = memo_jinv_.find(key);
  if (it != memo_jinv_.end()) return it->second;
  Scalar val;
  if (const auto* b = std::get_if<Bicharacter>(&j_.v))
    val = eval_bichar(*b, u, v, true);
  else if (const auto* e = std::get_if<ExpBivector>(&j_.v))
    val = eval_expbivector(*e, u, v, true);
  else
    val = jinv_triangular(u, v);
  memo_jinv_.emplace(std::move(key), val);
  return val;
}

// ---------------------------------------------------------------------------
// Bilinear wrappers.

Scalar CocycleContext::eval_J(const Element& f, const Element& h) {
  Scalar total(0);
  for (const auto& [mf, cf] : f.terms)
    for (const auto& [mh, ch] : h.terms) total += cf * ch * J_mon(mf, mh);
  return total;
}

Scalar CocycleContext::eval_Jinv(const Element& f, const Element& h) {
  Scalar total(0);
  for (const auto& [mf, cf] : f.terms)
    for (const auto& [mh, ch] : h.terms) total += cf * ch * Jinv_mon(mf, mh);
  return total;
}

Scalar CocycleContext::eval_Q(const Element& f, const Element& h) {
  return eval_J(f, h) - eval_J(h, f);
}

Scalar CocycleContext::eval_RJ(const Element& f, const Element& h) {
  Tensor tf = hctx_.coproduct(f);
  Tensor th = hctx_.coproduct(h);
  Scalar total(0);
  for (const auto& a : tf.terms)
    for (const auto& b : th.terms)
      total += a.coeff * b.coeff * Jinv_mon(b.legs[0], a.legs[0]) *
               J_mon(a.legs[1], b.legs[1]);
  return total;
}

// ---------------------------------------------------------------------------
// Axiom verification.

namespace {

// Violations found by one worker over a slice of the triple list.
struct SliceResult {
  std::vector<std::pair<long, AxiomViolation>> hits;
  // First evaluator error (by triple index), deferred across the parallel
  // region and rethrown after the join.
  long error_index = -1;
  Error error{Err::Internal, ""};
};

void check_triple(CocycleContext& ctx, const Monomial& a, const Monomial& b,
                  const Monomial& c, long index, SliceResult& out) {
  hopf::EvalContext& h = ctx.coalgebra();
  const Tensor& da = h.monomial_coproduct(a);
  const Tensor& db = h.monomial_coproduct(b);
  const Tensor& dc = h.monomial_coproduct(c);
  Scalar lhs(0), rhs(0);
  for (const auto& s : da.terms)
    for (const auto& t : db.terms) {
      Scalar val = s.coeff * t.coeff * ctx.J_mon(s.legs[0] * t.legs[0], c);
      if (!val.is_zero()) lhs += val * ctx.J_mon(s.legs[1], t.legs[1]);
    }
  for (const auto& t : db.terms)
    for (const auto& r : dc.terms) {
      Scalar val = t.coeff * r.coeff * ctx.J_mon(a, t.legs[0] * r.legs[0]);
      if (!val.is_zero()) rhs += val * ctx.J_mon(t.legs[1], r.legs[1]);
    }
  if (!(lhs == rhs))
    out.hits.push_back({index, AxiomViolation{"cocycle", {a, b, c}, lhs, rhs}});
}

}  // namespace

AxiomReport cocycle_axiom_check(const GroupData& g, const Cocycle& j,
                                const CheckOptions& opts) {
  AxiomReport report;
  std::vector<Monomial> mons = hopf::enumerate_monomials(g, opts.degree, opts.box_lo,
                                                         opts.box_hi);

  {
    CocycleContext ctx(g, j);
    Monomial one = Monomial::one(g.k(), g.m());
    for (const Monomial& mon : mons) {
      Scalar eps = counit_monomial(mon);
      Scalar left = ctx.J_mon(mon, one);
      Scalar right = ctx.J_mon(one, mon);
      if (!(left == eps))
        report.violations.push_back({"normalization", {mon, one}, left, eps});
      if (!(right == eps))
        report.violations.push_back({"normalization", {one, mon}, right, eps});
    }
  }

  std::vector<std::array<int, 3>> triples;
  const int nm = static_cast<int>(mons.size());
  for (int ia = 0; ia < nm; ++ia)
    for (int ib = 0; ib < nm; ++ib) {
      long wab = g.weight(mons[ia]) + g.weight(mons[ib]);
      if (wab > opts.degree) continue;
      for (int ic = 0; ic < nm; ++ic) {
        if (wab + g.weight(mons[ic]) > opts.degree) continue;
        triples.push_back({ia, ib, ic});
      }
    }
  report.triples_checked = static_cast<long>(triples.size());

  std::vector<SliceResult> slices;
  if (opts.parallel) {
#ifdef _OPENMP
#pragma omp parallel
    {
#pragma omp single
      slices.resize(omp_get_num_threads());
      CocycleContext ctx(g, j);
      SliceResult local;
#pragma omp for schedule(dynamic, 64)
      for (long idx = 0; idx < static_cast<long>(triples.size()); ++idx) {
        if (local.error_index >= 0) continue;
        const auto& tr = triples[idx];
        try {
          check_triple(ctx, mons[tr[0]], mons[tr[1]], mons[tr[2]], idx, local);
        } catch (const Error& e) {
          local.error_index = idx;
          local.error = e;
        }
      }
      slices[omp_get_thread_num()] = std::move(local);
    }
#else
    slices.resize(1);
    CocycleContext ctx(g, j);
    for (long idx = 0; idx < static_cast<long>(triples.size()); ++idx) {
      const auto& tr = triples[idx];
      check_triple(ctx, mons[tr[0]], mons[tr[1]], mons[tr[2]], idx, slices[0]);
    }
#endif
  } else {
    slices.resize(1);
    CocycleContext ctx(g, j);
    for (long idx = 0; idx < static_cast<long>(triples.size()); ++idx) {
      const auto& tr = triples[idx];
      check_triple(ctx, mons[tr[0]], mons[tr[1]], mons[tr[2]], idx, slices[0]);
    }
  }

  long first_error = -1;
  const Error* deferred = nullptr;
  for (const auto& s : slices)
    if (s.error_index >= 0 && (first_error < 0 || s.error_index < first_error)) {
      first_error = s.error_index;
      deferred = &s.error;
    }
  if (deferred) throw Error(*deferred);

  std::vector<std::pair<long, AxiomViolation>> merged;
  for (auto& s : slices)
    for (auto& h : s.hits) merged.push_back(std::move(h));
  std::sort(merged.begin(), merged.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [idx, v] : merged) report.violations.push_back(std::move(v));
  return report;
}

}  // namespace twist::cocycle
