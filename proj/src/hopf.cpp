#include "twist/hopf.hpp"

#include <algorithm>
#include <set>

namespace twist::hopf {

// ---------------------------------------------------------------------------
// Monomial

bool Monomial::is_one() const {
  return std::all_of(alpha.begin(), alpha.end(), [](long e) { return e == 0; }) &&
         std::all_of(beta.begin(), beta.end(), [](long e) { return e == 0; });
}

bool Monomial::torus_only() const {
  return std::all_of(beta.begin(), beta.end(), [](long e) { return e == 0; });
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial out = *this;
  for (size_t i = 0; i < alpha.size(); ++i) out.alpha[i] += o.alpha[i];
  for (size_t j = 0; j < beta.size(); ++j) out.beta[j] += o.beta[j];
  return out;
}

static int vec_graded_lex(const std::vector<long>& a, const std::vector<long>& b,
                          bool absolute) {
  long ga = 0, gb = 0;
  for (long e : a) ga += absolute ? std::abs(e) : e;
  for (long e : b) gb += absolute ? std::abs(e) : e;
  if (ga != gb) return ga < gb ? -1 : 1;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

int Monomial::compare(const Monomial& o) const {
  int c = vec_graded_lex(alpha, o.alpha, true);
  if (c != 0) return c;
  return vec_graded_lex(beta, o.beta, false);
}

// ---------------------------------------------------------------------------
// Element

Element Element::unit(int k, int m) { return monomial(Monomial::one(k, m)); }

Element Element::monomial(const Monomial& mon, const Scalar& c) {
  Element e;
  if (!c.is_zero()) e.terms.emplace_back(mon, c);
  return e;
}

void Element::normalize() {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first.compare(b.first) > 0; });
  std::vector<std::pair<Monomial, Scalar>> out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().first == t.first)
      out.back().second += t.second;
    else
      out.push_back(std::move(t));
    if (!out.empty() && out.back().second.is_zero()) out.pop_back();
  }
  std::vector<std::pair<Monomial, Scalar>> clean;
  for (auto& t : out)
    if (!t.second.is_zero()) clean.push_back(std::move(t));
  terms = std::move(clean);
}

Element Element::operator+(const Element& o) const {
  Element out;
  out.terms.reserve(terms.size() + o.terms.size());
  out.terms.insert(out.terms.end(), terms.begin(), terms.end());
  out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
  out.normalize();
  return out;
}

Element Element::operator-(const Element& o) const { return *this + o.negated(); }

Element Element::negated() const {
  Element out = *this;
  for (auto& t : out.terms) t.second = t.second.negated();
  return out;
}

Element Element::scaled(const Scalar& c) const {
  if (c.is_zero()) return {};
  Element out = *this;
  for (auto& t : out.terms) t.second *= c;
  return out;
}

Element Element::operator*(const Element& o) const {
  Element out;
  out.terms.reserve(terms.size() * o.terms.size());
  for (const auto& a : terms)
    for (const auto& b : o.terms)
      out.terms.emplace_back(a.first * b.first, a.second * b.second);
  out.normalize();
  return out;
}

bool Element::operator==(const Element& o) const {
  if (terms.size() != o.terms.size()) return false;
  for (size_t i = 0; i < terms.size(); ++i)
    if (!(terms[i].first == o.terms[i].first) || terms[i].second != o.terms[i].second)
      return false;
  return true;
}

Element commutative_product(const Element& a, const Element& b) { return a * b; }

std::vector<Monomial> enumerate_monomials(const GroupData& g, long maxw, long lo, long hi) {
  std::vector<Monomial> out;
  Monomial mon = Monomial::one(g.k(), g.m());
  // Build up recursively: torus exponents over the box, then filtered
  // exponents within the remaining weight budget.
  auto rec_z = [&](auto&& self, int j, long budget) -> void {
    if (j == g.m()) {
      out.push_back(mon);
      return;
    }
    for (long e = 0; e * g.zdeg[j] <= budget; ++e) {
      mon.beta[j] = e;
      self(self, j + 1, budget - e * g.zdeg[j]);
    }
    mon.beta[j] = 0;
  };
  auto rec_x = [&](auto&& self, int i) -> void {
    if (i == g.k()) {
      rec_z(rec_z, 0, maxw);
      return;
    }
    for (long a = lo; a <= hi; ++a) {
      mon.alpha[i] = a;
      self(self, i + 1);
    }
    mon.alpha[i] = 0;
  };
  rec_x(rec_x, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Tensor

static int legs_compare(const std::vector<Monomial>& a, const std::vector<Monomial>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    int c = a[i].compare(b[i]);
    if (c != 0) return c;
  }
  return 0;
}

Tensor Tensor::unit(int nlegs, int k, int m) {
  Tensor t;
  t.nlegs = nlegs;
  t.terms.push_back({std::vector<Monomial>(nlegs, Monomial::one(k, m)), Scalar(1)});
  return t;
}

void Tensor::normalize() {
  std::sort(terms.begin(), terms.end(), [](const TensorTerm& a, const TensorTerm& b) {
    return legs_compare(a.legs, b.legs) > 0;
  });
  std::vector<TensorTerm> out;
  for (auto& t : terms) {
    if (!out.empty() && legs_compare(out.back().legs, t.legs) == 0)
      out.back().coeff += t.coeff;
    else
      out.push_back(std::move(t));
    if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
  }
  std::vector<TensorTerm> clean;
  for (auto& t : out)
    if (!t.coeff.is_zero()) clean.push_back(std::move(t));
  terms = std::move(clean);
}

Tensor Tensor::operator+(const Tensor& o) const {
  if (nlegs != o.nlegs) fail(Err::Internal, "tensor leg mismatch");
  Tensor out;
  out.nlegs = nlegs;
  out.terms.reserve(terms.size() + o.terms.size());
  out.terms.insert(out.terms.end(), terms.begin(), terms.end());
  out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
  out.normalize();
  return out;
}

Tensor Tensor::operator-(const Tensor& o) const { return *this + o.scaled(Scalar(-1)); }

Tensor Tensor::scaled(const Scalar& c) const {
  if (c.is_zero()) return Tensor{nlegs, {}};
  Tensor out = *this;
  for (auto& t : out.terms) t.coeff *= c;
  return out;
}

Tensor Tensor::operator*(const Tensor& o) const {
  if (nlegs != o.nlegs) fail(Err::Internal, "tensor leg mismatch");
  Tensor out;
  out.nlegs = nlegs;
  out.terms.reserve(terms.size() * o.terms.size());
  for (const auto& a : terms)
    for (const auto& b : o.terms) {
      TensorTerm t;
      t.legs.reserve(nlegs);
      for (int l = 0; l < nlegs; ++l) t.legs.push_back(a.legs[l] * b.legs[l]);
      t.coeff = a.coeff * b.coeff;
      out.terms.push_back(std::move(t));
    }
  out.normalize();
  return out;
}

bool Tensor::operator==(const Tensor& o) const {
  if (nlegs != o.nlegs || terms.size() != o.terms.size()) return false;
  for (size_t i = 0; i < terms.size(); ++i)
    if (legs_compare(terms[i].legs, o.terms[i].legs) != 0 ||
        terms[i].coeff != o.terms[i].coeff)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// GroupData helpers

long GroupData::weight(const Monomial& mon) const {
  long w = 0;
  for (size_t j = 0; j < mon.beta.size(); ++j) w += mon.beta[j] * zdeg[j];
  return w;
}

Monomial GroupData::xgen(int i) const {
  Monomial mon = Monomial::one(k(), m());
  mon.alpha[i] = 1;
  return mon;
}

Monomial GroupData::zgen(int j) const {
  Monomial mon = Monomial::one(k(), m());
  mon.beta[j] = 1;
  return mon;
}

std::string GroupData::monomial_str(const Monomial& mon) const {
  std::string out;
  auto emit = [&](const std::string& name, long e) {
    if (e == 0) return;
    if (!out.empty()) out += "*";
    out += name;
    if (e != 1) out += "^" + std::to_string(e);
  };
  for (int i = 0; i < k(); ++i) emit(xnames[i], mon.alpha[i]);
  for (int j = 0; j < m(); ++j) emit(znames[j], mon.beta[j]);
  return out.empty() ? "1" : out;
}

std::string GroupData::element_str(const Element& e) const {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mon, c] : e.terms) {
    std::string cs = c.str(params);
    std::string ms = monomial_str(mon);
    std::string piece;
    bool wrap = cs.find(' ') != std::string::npos || cs.find('/') != std::string::npos;
    if (ms == "1") {
      piece = wrap ? "(" + cs + ")" : cs;
    } else if (cs == "1") {
      piece = ms;
    } else if (cs == "-1") {
      piece = "-" + ms;
    } else if (wrap) {
      piece = "(" + cs + ")*" + ms;
    } else {
      piece = cs + "*" + ms;
    }
    if (first) {
      out = piece;
      first = false;
    } else if (!piece.empty() && piece[0] == '-') {
      out += " - " + piece.substr(1);
    } else {
      out += " + " + piece;
    }
  }
  return out;
}

std::string GroupData::tensor_str(const Tensor& t) const {
  if (t.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& term : t.terms) {
    std::string legs;
    for (const auto& mon : term.legs) {
      if (!legs.empty()) legs += "⊗";
      legs += monomial_str(mon);
    }
    std::string cs = term.coeff.str(params);
    std::string piece;
    if (cs == "1") {
      piece = legs;
    } else if (cs == "-1") {
      piece = "-" + legs;
    } else if (cs.find(' ') != std::string::npos || cs.find('/') != std::string::npos) {
      piece = "(" + cs + ")*" + legs;
    } else {
      piece = cs + "*" + legs;
    }
    if (first) {
      out = piece;
      first = false;
    } else if (!piece.empty() && piece[0] == '-') {
      out += " - " + piece.substr(1);
    } else {
      out += " + " + piece;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counit

Scalar counit_monomial(const Monomial& mon) {
  return mon.torus_only() ? Scalar(1) : Scalar(0);
}

Scalar counit(const GroupData&, const Element& e) {
  Scalar out(0);
  for (const auto& [mon, c] : e.terms)
    if (mon.torus_only()) out += c;
  return out;
}

// ---------------------------------------------------------------------------
// EvalContext

Tensor EvalContext::zgen_coproduct(int j) {
  const int k = g_.k(), m = g_.m();
  Tensor t;
  t.nlegs = 2;
  Monomial one = Monomial::one(k, m);
  t.terms.push_back({{g_.zgen(j), one}, Scalar(1)});
  t.terms.push_back({{one, g_.zgen(j)}, Scalar(1)});
  for (const auto& zt : g_.zcorr[j])
    for (const auto& [ml, cl] : zt.left.terms)
      for (const auto& [mr, cr] : zt.right.terms)
        t.terms.push_back({{ml, mr}, cl * cr});
  t.normalize();
  return t;
}

const Tensor& EvalContext::monomial_coproduct(const Monomial& mon) {
  auto it = memo_.find(mon);
  if (it != memo_.end()) return it->second;
  const int k = g_.k(), m = g_.m();
  Monomial torus = Monomial::one(k, m);
  torus.alpha = mon.alpha;
  Tensor t;
  t.nlegs = 2;
  t.terms.push_back({{torus, torus}, Scalar(1)});
  for (int j = 0; j < m; ++j) {
    if (mon.beta[j] == 0) continue;
    Monomial zj = g_.zgen(j);
    auto key = zj;
    Tensor dz = memo_.count(key) ? memo_.at(key) : zgen_coproduct(j);
    memo_.emplace(key, dz);
    for (long p = 0; p < mon.beta[j]; ++p) t = t * dz;
  }
  return memo_.emplace(mon, std::move(t)).first->second;
}

Tensor EvalContext::coproduct(const Element& e) {
  Tensor out;
  out.nlegs = 2;
  for (const auto& [mon, c] : e.terms) {
    Tensor d = monomial_coproduct(mon).scaled(c);
    out.terms.insert(out.terms.end(), d.terms.begin(), d.terms.end());
  }
  out.normalize();
  return out;
}

Tensor EvalContext::expand_leg(const Tensor& t, int leg) {
  Tensor out;
  out.nlegs = t.nlegs + 1;
  for (const auto& term : t.terms) {
    const Tensor& d = monomial_coproduct(term.legs[leg]);
    for (const auto& dt : d.terms) {
      TensorTerm nt;
      nt.legs.reserve(out.nlegs);
      for (int l = 0; l < leg; ++l) nt.legs.push_back(term.legs[l]);
      nt.legs.push_back(dt.legs[0]);
      nt.legs.push_back(dt.legs[1]);
      for (int l = leg + 1; l < t.nlegs; ++l) nt.legs.push_back(term.legs[l]);
      nt.coeff = term.coeff * dt.coeff;
      out.terms.push_back(std::move(nt));
    }
  }
  out.normalize();
  return out;
}

Tensor EvalContext::iterated_coproduct(const Element& e, int n) {
  if (n < 1) fail(Err::Internal, "iterated coproduct needs n >= 1");
  if (n == 1) {
    Tensor t;
    t.nlegs = 1;
    for (const auto& [mon, c] : e.terms) t.terms.push_back({{mon}, c});
    t.normalize();
    return t;
  }
  Tensor t = coproduct(e);
  while (t.nlegs < n) t = expand_leg(t, 0);
  return t;
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_hopf(const GroupData& g) {
  ValidationReport rep;
  auto add = [&](const std::string& axiom, const std::string& witness) {
    rep.failures.push_back({axiom, witness});
  };

  // schema sanity
  std::set<std::string> names;
  for (const auto& n : g.xnames)
    if (!names.insert(n).second) add("schema", "duplicate variable name " + n);
  for (const auto& n : g.znames)
    if (!names.insert(n).second) add("schema", "duplicate variable name " + n);
  for (const auto& n : g.params.names)
    if (names.count(n)) add("schema", "parameter shadows variable " + n);
  if (g.zdeg.size() != g.znames.size() || g.zcorr.size() != g.znames.size()) {
    add("schema", "filtered variable metadata sizes disagree");
    return rep;
  }
  for (size_t j = 0; j < g.zdeg.size(); ++j)
    if (g.zdeg[j] < 1) add("schema", "degree of " + g.znames[j] + " must be >= 1");

  // filtration shape (strict mode)
  if (!g.extended) {
    const int m = g.m();
    if (m >= 1 && g.zdeg[0] != 1) add("filtration", g.znames[0] + " must have degree 1");
    if (m >= 2 && g.zdeg[1] != 1) add("filtration", g.znames[1] + " must have degree 1");
    for (int j = 0; j + 1 < m; ++j)
      if (g.zdeg[j] > g.zdeg[j + 1])
        add("filtration", "degrees must be weakly increasing at " + g.znames[j + 1]);
    if (m >= 2) {
      if (!g.zcorr[0].empty()) add("filtration", g.znames[0] + " must be primitive");
      if (!g.zcorr[1].empty()) add("filtration", g.znames[1] + " must be primitive");
    }
  }

  // coproduct correction legality
  for (int j = 0; j < g.m(); ++j) {
    for (size_t ti = 0; ti < g.zcorr[j].size(); ++ti) {
      const ZTerm& zt = g.zcorr[j][ti];
      std::string where = "coproduct term " + std::to_string(ti + 1) + " of " + g.znames[j];
      if (zt.left.is_zero() || zt.right.is_zero()) {
        add("schema", where + " has a zero leg");
        continue;
      }
      if (!counit(g, zt.left).is_zero()) add("leg-augmentation", where + ", left leg");
      if (!counit(g, zt.right).is_zero()) add("leg-augmentation", where + ", right leg");
      long wl = 0, wr = 0;
      bool torus_used = false, self_or_later = false;
      auto scan = [&](const Element& e, long& w) {
        for (const auto& [mon, c] : e.terms) {
          w = std::max(w, g.weight(mon));
          for (long a : mon.alpha)
            if (a != 0) torus_used = true;
          for (int jj = j; jj < g.m(); ++jj)
            if (mon.beta[jj] != 0) self_or_later = true;
        }
      };
      scan(zt.left, wl);
      scan(zt.right, wr);
      if (g.extended) {
        // the right-leg strict bound keeps Sweedler recursions on the left
        // slot well-founded; a full-weight left leg is admissible only for
        // the variable itself alongside a torus companion, so that the only
        // coproduct term whose left leg reproduces a monomial is its
        // diagonal term
        if (wr >= g.zdeg[j]) add("filtration", where + ": right leg weight too high");
        if (wl > g.zdeg[j]) add("filtration", where + ": left leg weight too high");
        if (wl == g.zdeg[j]) {
          bool left_is_self =
              zt.left.terms.size() == 1 && zt.left.terms[0].first == g.zgen(j);
          bool right_torus = true;
          for (const auto& [mon, c] : zt.right.terms)
            for (long b : mon.beta)
              if (b != 0) right_torus = false;
          if (!left_is_self)
            add("filtration", where + ": full-weight left leg must be the variable itself");
          else if (!right_torus)
            add("filtration", where + ": companion of a full-weight left leg must be torus-only");
        }
      } else {
        if (torus_used) add("filtration", where + ": torus variable in strict mode");
        if (self_or_later) add("filtration", where + ": later variable used");
        if (wl > g.zdeg[j] - 1 || wr > g.zdeg[j] - 1)
          add("filtration", where + ": leg weight exceeds degree - 1");
      }
    }
  }
  if (!rep.ok()) return rep;  // axioms below assume well-formed data

  // counit and coassociativity on generators
  EvalContext ctx(g);
  const int k = g.k(), m = g.m();
  auto check_gen = [&](const Monomial& gen, const std::string& name) {
    Element e = Element::monomial(gen);
    Tensor d = ctx.coproduct(e);
    Element left, right;
    for (const auto& t : d.terms) {
      left = left + Element::monomial(t.legs[1], t.coeff * counit_monomial(t.legs[0]));
      right = right + Element::monomial(t.legs[0], t.coeff * counit_monomial(t.legs[1]));
    }
    if (!(left == e)) add("counit", "(eps,id) fails on " + name);
    if (!(right == e)) add("counit", "(id,eps) fails on " + name);
    Tensor a = ctx.expand_leg(d, 0);
    Tensor b = ctx.expand_leg(d, 1);
    if (!(a == b)) add("coassociativity", name);
  };
  for (int i = 0; i < k; ++i) check_gen(g.xgen(i), g.xnames[i]);
  for (int j = 0; j < m; ++j) check_gen(g.zgen(j), g.znames[j]);
  return rep;
}

}  // namespace twist::hopf
