#include "twist/twisted.hpp"

#include <map>
#include <utility>

#include "twist/error.hpp"

namespace twist::twistalg {

using hopf::Tensor;
using hopf::ZTerm;

namespace {

Element collect(std::vector<std::pair<Monomial, Scalar>>&& terms) {
  Element e;
  e.terms = std::move(terms);
  e.normalize();
  return e;
}

}  // namespace

Element twisted_product(CocycleContext& ctx, const Element& f, const Element& h) {
  Tensor df = ctx.coalgebra().coproduct(f);
  Tensor dh = ctx.coalgebra().coproduct(h);
  std::vector<std::pair<Monomial, Scalar>> out;
  for (const auto& a : df.terms)
    for (const auto& b : dh.terms) {
      Scalar jv = ctx.J_mon(a.legs[1], b.legs[1]);
      if (jv.is_zero()) continue;
      out.emplace_back(a.legs[0] * b.legs[0], a.coeff * b.coeff * jv);
    }
  return collect(std::move(out));
}

Element left_twisted_product(CocycleContext& ctx, const Element& f, const Element& h) {
  Tensor df = ctx.coalgebra().coproduct(f);
  Tensor dh = ctx.coalgebra().coproduct(h);
  std::vector<std::pair<Monomial, Scalar>> out;
  for (const auto& a : df.terms)
    for (const auto& b : dh.terms) {
      Scalar jv = ctx.Jinv_mon(a.legs[0], b.legs[0]);
      if (jv.is_zero()) continue;
      out.emplace_back(a.legs[1] * b.legs[1], a.coeff * b.coeff * jv);
    }
  return collect(std::move(out));
}

Element twisted_hopf_product(CocycleContext& ctx, const Element& f, const Element& h) {
  Tensor df = ctx.coalgebra().iterated_coproduct(f, 3);
  Tensor dh = ctx.coalgebra().iterated_coproduct(h, 3);
  std::vector<std::pair<Monomial, Scalar>> out;
  for (const auto& a : df.terms)
    for (const auto& b : dh.terms) {
      Scalar lv = ctx.Jinv_mon(a.legs[0], b.legs[0]);
      if (lv.is_zero()) continue;
      Scalar rv = ctx.J_mon(a.legs[2], b.legs[2]);
      if (rv.is_zero()) continue;
      out.emplace_back(a.legs[1] * b.legs[1], a.coeff * b.coeff * lv * rv);
    }
  return collect(std::move(out));
}

// ---------------------------------------------------------------------------
// TwistedElement basics

TwistedElement TwistedElement::one(const GroupData& g) {
  return {Element::unit(g.k(), g.m())};
}

TwistedElement TwistedElement::word(const Monomial& mon, const Scalar& c) {
  return {Element::monomial(mon, c)};
}

// ---------------------------------------------------------------------------
// Expansion: normal words -> commutative basis

// A normal word stands for the ordered twisted product of its letters, with
// the torus block split into single-variable blocks; ascending cross pairs
// contribute their cocycle values to the leading coefficient.
static Scalar torus_block_factor(CocycleContext& ctx, const Monomial& word) {
  const GroupData& g = ctx.group();
  Scalar c(1);
  for (int i = 0; i < g.k(); ++i)
    for (int l = i + 1; l < g.k(); ++l) {
      if (word.alpha[i] == 0 || word.alpha[l] == 0) continue;
      Monomial a = Monomial::one(g.k(), g.m());
      a.alpha[i] = word.alpha[i];
      Monomial b = Monomial::one(g.k(), g.m());
      b.alpha[l] = word.alpha[l];
      c = c * ctx.J_mon(a, b);
    }
  return c;
}

Element expand_word(CocycleContext& ctx, const Monomial& word) {
  const GroupData& g = ctx.group();
  Monomial torus = Monomial::one(g.k(), g.m());
  torus.alpha = word.alpha;
  Element acc = Element::monomial(torus, torus_block_factor(ctx, word));
  for (int j = 0; j < g.m(); ++j)
    for (long t = 0; t < word.beta[j]; ++t)
      acc = twisted_product(ctx, acc, Element::monomial(g.zgen(j)));
  return acc;
}

Element expand_normal(CocycleContext& ctx, const TwistedElement& t) {
  Element out;
  for (const auto& [mon, c] : t.rep.terms) out = out + expand_word(ctx, mon).scaled(c);
  return out;
}

TwistedElement to_normal(CocycleContext& ctx, const Element& v) {
  const GroupData& g = ctx.group();
  Element rem = v;
  TwistedElement out;
  while (!rem.is_zero()) {
    // peel off the term of highest filtration weight (the expansion of its
    // word reproduces it with the invertible torus block factor as leading
    // coefficient, plus lower-weight corrections)
    size_t best = 0;
    long bw = g.weight(rem.terms[0].first);
    for (size_t i = 1; i < rem.terms.size(); ++i) {
      long w = g.weight(rem.terms[i].first);
      if (w > bw || (w == bw && rem.terms[best].first < rem.terms[i].first)) {
        best = i;
        bw = w;
      }
    }
    Monomial mon = rem.terms[best].first;
    Scalar c = rem.terms[best].second / torus_block_factor(ctx, mon);
    out = out + TwistedElement::word(mon, c);
    rem = rem - expand_word(ctx, mon).scaled(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presentation formulas

namespace {

Element el(const Monomial& mon) { return Element::monomial(mon); }

Element presentation_p(CocycleContext& ctx, int i, int j) {
  const GroupData& g = ctx.group();
  Element xi = el(g.xgen(i));
  Element out = Element::unit(g.k(), g.m()).scaled(ctx.eval_Q(xi, el(g.zgen(j))));
  for (const ZTerm& t : g.zcorr[j]) out = out + t.left.scaled(ctx.eval_Q(xi, t.right));
  return out;
}

Element presentation_C(CocycleContext& ctx, int i, int j) {
  const GroupData& g = ctx.group();
  Element zi = el(g.zgen(i)), zj = el(g.zgen(j));
  Element out = Element::unit(g.k(), g.m()).scaled(ctx.eval_Q(zi, zj));
  for (const ZTerm& t : g.zcorr[i]) out = out + t.left.scaled(ctx.eval_Q(t.right, zj));
  for (const ZTerm& s : g.zcorr[j]) out = out + s.left.scaled(ctx.eval_Q(zi, s.right));
  for (const ZTerm& t : g.zcorr[i])
    for (const ZTerm& s : g.zcorr[j]) {
      Scalar q = ctx.eval_Q(t.right, s.right);
      if (q.is_zero()) continue;
      out = out + twisted_product(ctx, t.left, s.left).scaled(q);
    }
  return out;
}

}  // namespace

Presentation derive_presentation(CocycleContext& ctx) {
  const GroupData& g = ctx.group();
  const int k = g.k(), m = g.m();
  Presentation P;
  P.g = g;

  P.lambda.assign(k, std::vector<Scalar>(k, Scalar(1)));
  for (int i = 0; i < k; ++i) {
    Element xi = el(g.xgen(i));
    Monomial inv = Monomial::one(k, m);
    inv.alpha[i] = -1;
    if (!ctx.eval_J(xi, xi).is_one() || !ctx.eval_J(xi, el(inv)).is_one())
      fail(Err::SchemaError,
           "torus variable " + g.xnames[i] + " pairs nontrivially with itself");
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      P.lambda[i][j] = ctx.eval_RJ(xi, el(g.xgen(j)));
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (!(P.lambda[i][j] * P.lambda[j][i]).is_one())
        fail(Err::Internal, "commutation scalars are not antisymmetric");
  // block reordering uses powers of lambda, so the commutation scalar of
  // exponent blocks has to match that power law on a sample grid
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b) {
          Monomial u = Monomial::one(k, m), v = Monomial::one(k, m);
          u.alpha[i] = a;
          v.alpha[j] = b;
          if (!(ctx.eval_RJ(el(u), el(v)) == P.lambda[i][j].pow(a * b)))
            fail(Err::SchemaError, "torus variables " + g.xnames[i] + ", " +
                                       g.xnames[j] +
                                       " do not commute by a bicharacter");
        }

  P.p.assign(k, std::vector<Element>(m));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) {
      P.p[i][j] = presentation_p(ctx, i, j);
      for (const auto& [mon, c] : P.p[i][j].terms)
        if (g.weight(mon) >= g.zdeg[j])
          fail(Err::Internal, "torus action term does not lower the degree");
    }

  P.C.assign(m, std::vector<Element>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      P.C[i][j] = presentation_C(ctx, i, j);
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) {
      if (!(P.C[i][j] + P.C[j][i]).is_zero())
        fail(Err::Internal, "commutator terms are not antisymmetric");
      if (!g.extended)
        for (const auto& [mon, c] : P.C[i][j].terms)
          for (int t = i; t < m; ++t)
            if (mon.beta[t] != 0)
              fail(Err::FiltrationViolation,
                   "commutator of " + g.znames[i] + ", " + g.znames[j] +
                       " escapes the lower filtered subalgebra");
    }

  // re-verify every relation against the product itself
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      Element lhs = twisted_product(ctx, el(g.xgen(i)), el(g.xgen(j)));
      Element rhs =
          twisted_product(ctx, el(g.xgen(j)), el(g.xgen(i))).scaled(P.lambda[i][j]);
      if (!(lhs == rhs)) fail(Err::Internal, "torus relation failed re-verification");
    }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) {
      Element lhs = twisted_product(ctx, el(g.xgen(i)), el(g.zgen(j)));
      Element rhs =
          twisted_product(ctx, el(g.zgen(j)) + P.p[i][j], el(g.xgen(i)));
      if (!(lhs == rhs))
        fail(Err::Internal, "torus action relation failed re-verification");
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) {
      Element lhs = twisted_product(ctx, el(g.zgen(i)), el(g.zgen(j))) -
                    twisted_product(ctx, el(g.zgen(j)), el(g.zgen(i)));
      if (!(lhs == P.C[i][j]))
        fail(Err::Internal, "commutator relation failed re-verification");
    }

  P.pw.assign(k, std::vector<TwistedElement>(m));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) P.pw[i][j] = to_normal(ctx, P.p[i][j]);
  P.Cw.assign(m, std::vector<TwistedElement>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) P.Cw[i][j] = to_normal(ctx, P.C[i][j]);
  return P;
}

std::string Presentation::relations_str() const {
  std::string out;
  auto line = [&](const std::string& s) { out += s + "\n"; };
  for (int i = 0; i < g.k(); ++i)
    for (int j = i + 1; j < g.k(); ++j) {
      std::string rhs = lambda[i][j].is_one() ? "" : lambda[i][j].str(g.params) + " ";
      line(g.xnames[i] + " " + g.xnames[j] + " = " + rhs + g.xnames[j] + " " +
           g.xnames[i]);
    }
  for (int i = 0; i < g.k(); ++i)
    for (int j = 0; j < g.m(); ++j) {
      if (p[i][j].is_zero()) {
        line(g.xnames[i] + " " + g.znames[j] + " = " + g.znames[j] + " " +
             g.xnames[i]);
      } else {
        line(g.xnames[i] + " " + g.znames[j] + " = (" + g.znames[j] + " + " +
             g.element_str(p[i][j]) + ") " + g.xnames[i]);
      }
    }
  for (int i = 0; i < g.m(); ++i)
    for (int j = 0; j < i; ++j) {
      std::string rhs = g.znames[j] + " " + g.znames[i];
      if (!C[i][j].is_zero()) rhs += " + " + g.element_str(C[i][j]);
      line(g.znames[i] + " " + g.znames[j] + " = " + rhs);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Rewriting engine.  All products reduce to three moves:
//   * merging torus blocks through the lambda relations,
//   * conjugating filtered letters across torus letters (z x = x phi^{-1}(z)),
//   * inserting a filtered letter into an ordered block via the commutators.
// Each move either shortens the word or strictly lowers the total filtration
// weight, so the recursion terminates.

namespace {

class Engine {
 public:
  explicit Engine(const Presentation& P) : P_(P), g_(P.g) {}

  TwistedElement mul(const TwistedElement& a, const TwistedElement& b) {
    TwistedElement out;
    for (const auto& [am, ac] : a.rep.terms)
      for (const auto& [bm, bc] : b.rep.terms)
        out = out + mul_words(am, bm).scaled(ac * bc);
    return out;
  }

  TwistedElement mul_words(const Monomial& a, const Monomial& b) {
    // a = x^al z^ab, b = x^bl z^bb:
    //   a b = swap(al, bl) x^{al+bl} (phi^{-bl}(z^ab) . z^bb)
    TwistedElement t = TwistedElement::word(zpart(a));
    for (int i = 0; i < g_.k(); ++i)
      if (b.alpha[i] != 0) t = conj_power(i, -b.alpha[i], t);
    for (int j = 0; j < g_.m(); ++j)
      for (long r = 0; r < b.beta[j]; ++r) t = mul_z(t, j);
    std::vector<long> merged(g_.k());
    for (int i = 0; i < g_.k(); ++i) merged[i] = a.alpha[i] + b.alpha[i];
    return attach_torus(merged, t).scaled(swap_factor(a.alpha, b.alpha));
  }

 private:
  const Presentation& P_;
  const GroupData& g_;
  std::map<std::pair<int, int>, TwistedElement> psi_;  // phi_i^{-1}(z_j)

  Monomial zpart(const Monomial& mon) const {
    Monomial z = Monomial::one(g_.k(), g_.m());
    z.beta = mon.beta;
    return z;
  }

  // scalar picked up when x^A crosses to the left of x^a
  Scalar swap_factor(const std::vector<long>& A, const std::vector<long>& a) const {
    Scalar s(1);
    for (int l = 0; l < g_.k(); ++l)
      for (int i = 0; i < l; ++i)
        if (A[l] != 0 && a[i] != 0) s *= P_.lambda[l][i].pow(A[l] * a[i]);
    return s;
  }

  // x^A . t for every word of t, merging torus blocks
  TwistedElement attach_torus(const std::vector<long>& A, const TwistedElement& t) {
    bool zero = true;
    for (long v : A) zero = zero && v == 0;
    if (zero) return t;
    TwistedElement out;
    for (const auto& [mon, c] : t.rep.terms) {
      Monomial w = mon;
      for (int i = 0; i < g_.k(); ++i) w.alpha[i] += A[i];
      out = out + TwistedElement::word(w, c * swap_factor(A, mon.alpha));
    }
    return out;
  }

  // t . z_j for every word of t
  TwistedElement mul_z(const TwistedElement& t, int j) {
    TwistedElement out;
    for (const auto& [mon, c] : t.rep.terms) out = out + word_z(mon, j).scaled(c);
    return out;
  }

  // (x^a z^b) . z_j: insert the letter into the ordered filtered block
  TwistedElement word_z(const Monomial& mon, int j) {
    int top = -1;
    for (int l = g_.m() - 1; l > j; --l)
      if (mon.beta[l] > 0) {
        top = l;
        break;
      }
    if (top < 0) {
      Monomial w = mon;
      w.beta[j] += 1;
      return TwistedElement::word(w);
    }
    // ... z_top . z_j = ... (z_j z_top + C[top][j])
    Monomial head = mon;
    head.beta[top] -= 1;
    TwistedElement swapped = mul_z(word_z(zpart(head), j), top);
    TwistedElement comm = mul(TwistedElement::word(zpart(head)), P_.Cw[top][j]);
    return attach_torus(head.alpha, swapped + comm);
  }

  // phi_i^e applied to a twisted element, one conjugation at a time
  TwistedElement conj_power(int i, long e, const TwistedElement& t) {
    TwistedElement out = t;
    for (long r = 0; r < (e > 0 ? e : -e); ++r)
      out = e > 0 ? conj_once(i, out) : conj_inv_once(i, out);
    return out;
  }

  // phi_i: x^a -> prod_l lambda[i][l]^{a_l} x^a,  z_j -> z_j + p[i][j]
  TwistedElement conj_once(int i, const TwistedElement& t) {
    TwistedElement out;
    for (const auto& [mon, c] : t.rep.terms) {
      TwistedElement acc = TwistedElement::one(g_);
      for (int j = 0; j < g_.m(); ++j) {
        TwistedElement img =
            TwistedElement::word(zgen_word(j)) + P_.pw[i][j];
        for (long r = 0; r < mon.beta[j]; ++r) acc = mul(acc, img);
      }
      Scalar s = c;
      for (int l = 0; l < g_.k(); ++l)
        if (mon.alpha[l] != 0) s *= P_.lambda[i][l].pow(mon.alpha[l]);
      out = out + attach_torus(mon.alpha, acc).scaled(s);
    }
    return out;
  }

  TwistedElement conj_inv_once(int i, const TwistedElement& t) {
    TwistedElement out;
    for (const auto& [mon, c] : t.rep.terms) {
      TwistedElement acc = TwistedElement::one(g_);
      for (int j = 0; j < g_.m(); ++j)
        for (long r = 0; r < mon.beta[j]; ++r) acc = mul(acc, psi(i, j));
      Scalar s = c;
      for (int l = 0; l < g_.k(); ++l)
        if (mon.alpha[l] != 0) s *= P_.lambda[i][l].pow(-mon.alpha[l]);
      out = out + attach_torus(mon.alpha, acc).scaled(s);
    }
    return out;
  }

  // phi_i^{-1}(z_j) = z_j - phi_i^{-1}(p[i][j]); p has lower weight, so the
  // recursion grounds out
  const TwistedElement& psi(int i, int j) {
    auto key = std::make_pair(i, j);
    auto it = psi_.find(key);
    if (it != psi_.end()) return it->second;
    TwistedElement v = TwistedElement::word(zgen_word(j)) -
                       conj_inv_once(i, P_.pw[i][j]);
    return psi_.emplace(key, std::move(v)).first->second;
  }

  Monomial zgen_word(int j) const { return g_.zgen(j); }
};

Monomial letter_monomial(const GroupData& g, const Letter& l) {
  if (l.torus) {
    if (l.index < 0 || l.index >= g.k()) fail(Err::SchemaError, "torus letter out of range");
  } else {
    if (l.index < 0 || l.index >= g.m())
      fail(Err::SchemaError, "filtered letter out of range");
    if (l.power < 0) fail(Err::SchemaError, "filtered letter with negative power");
  }
  Monomial mon = Monomial::one(g.k(), g.m());
  if (l.torus)
    mon.alpha[l.index] = l.power;
  else
    mon.beta[l.index] = l.power;
  return mon;
}

}  // namespace

TwistedElement normal_form(const Word& w, const Presentation& P) {
  Engine e(P);
  TwistedElement acc = TwistedElement::one(P.g);
  for (const Letter& l : w)
    acc = e.mul(acc, TwistedElement::word(letter_monomial(P.g, l)));
  return acc;
}

TwistedElement nf_mul(const TwistedElement& a, const TwistedElement& b,
                      const Presentation& P) {
  Engine e(P);
  return e.mul(a, b);
}

TwistedElement commutator(const TwistedElement& a, const TwistedElement& b,
                          const Presentation& P) {
  Engine e(P);
  return e.mul(a, b) - e.mul(b, a);
}

}  // namespace twist::twistalg
