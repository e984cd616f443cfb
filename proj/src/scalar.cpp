#include "twist/scalar.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <sstream>

namespace twist::scalars {

std::string rat_str(const Rat& q) { return q.get_str(); }

static Rat make_rat(long p, long q) {
  Rat r(p);
  r /= Rat(q);
  return r;
}

// ---------------------------------------------------------------------------
// ParamTable

int ParamTable::index_of(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

void ParamTable::validate() const {
  if (cyclotomic_order < 1) fail(Err::SchemaError, "cyclotomic order must be >= 1");
  for (size_t i = 0; i < names.size(); ++i)
    for (size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j]) fail(Err::SchemaError, "duplicate parameter name: " + names[i]);
}

// ---------------------------------------------------------------------------
// LinForm

LinForm LinForm::symbol(int index) {
  LinForm f;
  f.terms.emplace_back(index, Rat(1));
  return f;
}

static LinForm linform_merge(const LinForm& a, const LinForm& b, int bsign) {
  LinForm out;
  size_t i = 0, j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    if (j == b.terms.size() || (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
      out.terms.push_back(a.terms[i++]);
    } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
      out.terms.emplace_back(b.terms[j].first, bsign * b.terms[j].second);
      ++j;
    } else {
      Rat c = a.terms[i].second + bsign * b.terms[j].second;
      if (c != 0) out.terms.emplace_back(a.terms[i].first, c);
      ++i;
      ++j;
    }
  }
  return out;
}

LinForm LinForm::operator+(const LinForm& o) const { return linform_merge(*this, o, 1); }
LinForm LinForm::operator-(const LinForm& o) const { return linform_merge(*this, o, -1); }

LinForm LinForm::negated() const {
  LinForm out = *this;
  for (auto& t : out.terms) t.second = -t.second;
  return out;
}

LinForm LinForm::scaled(const Rat& c) const {
  if (c == 0) return {};
  LinForm out = *this;
  for (auto& t : out.terms) t.second *= c;
  return out;
}

int LinForm::compare(const LinForm& o) const {
  size_t i = 0, j = 0;
  while (i < terms.size() || j < o.terms.size()) {
    int ia = i < terms.size() ? terms[i].first : INT32_MAX;
    int ib = j < o.terms.size() ? o.terms[j].first : INT32_MAX;
    if (ia < ib) {
      int s = sgn(terms[i].second);
      return s > 0 ? 1 : -1;  // other side has coefficient 0 here
    }
    if (ib < ia) {
      int s = sgn(o.terms[j].second);
      return s > 0 ? -1 : 1;
    }
    int c = cmp(terms[i].second, o.terms[j].second);
    if (c != 0) return c;
    ++i;
    ++j;
  }
  return 0;
}

std::string LinForm::str(const ParamTable& pt) const {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [idx, c] : terms) {
    std::string name = idx >= 0 && idx < (int)pt.names.size() ? pt.names[idx]
                                                              : "s" + std::to_string(idx);
    Rat a = c > 0 ? c : Rat(-c);
    std::string piece = (a == 1) ? name : rat_str(a) + "*" + name;
    if (first) {
      out = (c < 0 ? "-" : "") + piece;
      first = false;
    } else {
      out += (c < 0 ? " - " : " + ") + piece;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials and CycF

static std::vector<Rat> poly_div_exact_q(std::vector<Rat> num, const std::vector<Rat>& den) {
  // dense univariate exact division over Q, den monic-led
  std::vector<Rat> q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, Rat(0));
  while (num.size() >= den.size()) {
    while (!num.empty() && num.back() == 0) num.pop_back();
    if (num.size() < den.size()) break;
    Rat c = num.back() / den.back();
    size_t shift = num.size() - den.size();
    q[shift] = c;
    for (size_t i = 0; i < den.size(); ++i) num[shift + i] -= c * den[i];
    while (!num.empty() && num.back() == 0) num.pop_back();
    if (num.empty()) break;
  }
  return q;
}

const std::vector<Rat>& cyclotomic_poly(long n) {
  static std::map<long, std::vector<Rat>> cache;
  static std::shared_mutex mx;
  {
    std::shared_lock lk(mx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
  std::vector<Rat> num(n + 1, Rat(0));
  num[0] = Rat(-1);
  num[n] = Rat(1);
  for (long d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    num = poly_div_exact_q(std::move(num), cyclotomic_poly(d));
  }
  std::unique_lock lk(mx);
  return cache.emplace(n, std::move(num)).first->second;
}

void CycF::reduce(std::vector<Rat>& raw) const {
  const auto& phi = cyclotomic_poly(n_);
  size_t deg = phi.size() - 1;
  for (size_t i = raw.size(); i-- > deg;) {
    Rat c = raw[i];
    if (c == 0) continue;
    raw[i] = 0;
    for (size_t j = 0; j < deg; ++j) raw[i - deg + j] -= c * phi[j];
  }
  raw.resize(deg);
}

CycF CycF::zeta_pow(long n, long k) {
  if (n < 1) fail(Err::SchemaError, "cyclotomic order must be >= 1");
  k %= n;
  if (k < 0) k += n;
  CycF out;
  out.n_ = n;
  size_t deg = cyclotomic_poly(n).size() - 1;
  std::vector<Rat> raw(n, Rat(0));
  raw[k] = Rat(1);
  out.reduce(raw);
  raw.resize(deg);
  out.c_ = std::move(raw);
  return out;
}

bool CycF::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rat& r) { return r == 0; });
}

bool CycF::is_one() const {
  if (c_[0] != 1) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](const Rat& r) { return r == 0; });
}

bool CycF::is_rational() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](const Rat& r) { return r == 0; });
}

std::optional<Rat> CycF::as_rational() const {
  if (!is_rational()) return std::nullopt;
  return c_[0];
}

std::optional<long> CycF::as_zeta_power() const {
  for (long k = 0; k < n_; ++k)
    if (*this == zeta_pow(n_, k)) return k;
  return std::nullopt;
}

void CycF::promote(CycF& a, CycF& b) {
  if (a.n_ == b.n_) return;
  if (a.n_ != 1 && b.n_ != 1)
    fail(Err::SchemaError, "mixed cyclotomic orders in one computation");
  CycF& low = a.n_ == 1 ? a : b;
  const CycF& high = a.n_ == 1 ? b : a;
  Rat v = low.c_[0];
  low.n_ = high.n_;
  low.c_.assign(high.c_.size(), Rat(0));
  low.c_[0] = v;
}

CycF CycF::operator+(const CycF& o) const {
  CycF a = *this, b = o;
  promote(a, b);
  for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
  return a;
}

CycF CycF::operator-(const CycF& o) const { return *this + o.negated(); }

CycF CycF::negated() const {
  CycF a = *this;
  for (auto& r : a.c_) r = -r;
  return a;
}

CycF CycF::operator*(const CycF& o) const {
  CycF a = *this, b = o;
  promote(a, b);
  std::vector<Rat> raw(a.c_.size() + b.c_.size() - 1, Rat(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j)
      if (b.c_[j] != 0) raw[i + j] += a.c_[i] * b.c_[j];
  }
  a.reduce(raw);
  a.c_ = std::move(raw);
  return a;
}

CycF CycF::inverse() const {
  if (is_zero()) fail(Err::DivisionByZero, "inverse of zero");
  if (n_ == 1) {
    CycF out;
    out.c_[0] = 1 / c_[0];
    return out;
  }
  // extended Euclid: u * this + v * Phi = 1 over Q[x]
  std::vector<Rat> r0 = cyclotomic_poly(n_), r1 = c_;
  while (!r1.empty() && r1.back() == 0) r1.pop_back();
  std::vector<Rat> s0{Rat(0)}, s1{Rat(1)};  // coefficients of `this`
  while (true) {
    // r0 = q * r1 + r2
    std::vector<Rat> r2 = r0, q(r0.size(), Rat(0));
    while (r2.size() >= r1.size()) {
      while (!r2.empty() && r2.back() == 0) r2.pop_back();
      if (r2.size() < r1.size()) break;
      Rat c = r2.back() / r1.back();
      size_t shift = r2.size() - r1.size();
      q[shift] = c;
      for (size_t i = 0; i < r1.size(); ++i) r2[shift + i] -= c * r1[i];
      while (!r2.empty() && r2.back() == 0) r2.pop_back();
      if (r2.empty()) break;
    }
    // s2 = s0 - q * s1
    std::vector<Rat> s2 = s0;
    s2.resize(std::max(s0.size(), q.size() + s1.size()), Rat(0));
    for (size_t i = 0; i < q.size(); ++i) {
      if (q[i] == 0) continue;
      for (size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
    }
    if (r2.empty()) {
      // r1 is the gcd (a nonzero constant since Phi_n is irreducible)
      if (r1.size() != 1)
        fail(Err::Internal, "cyclotomic inverse: non-constant gcd");
      CycF out;
      out.n_ = n_;
      out.c_.assign(cyclotomic_poly(n_).size() - 1, Rat(0));
      for (size_t i = 0; i < s1.size() && i < out.c_.size(); ++i) out.c_[i] = s1[i] / r1[0];
      return out;
    }
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
}

CycF CycF::operator/(const CycF& o) const { return *this * o.inverse(); }

int CycF::compare(const CycF& o) const {
  CycF a = *this, b = o;
  promote(a, b);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    int c = cmp(a.c_[i], b.c_[i]);
    if (c != 0) return c;
  }
  return 0;
}

std::string CycF::str() const {
  std::string out;
  bool first = true;
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    Rat a = c_[k] > 0 ? c_[k] : Rat(-c_[k]);
    std::string piece;
    if (k == 0) {
      piece = rat_str(a);
    } else {
      std::string z = k == 1 ? "zeta" : "zeta^" + std::to_string(k);
      piece = (a == 1) ? z : rat_str(a) + "*" + z;
    }
    if (first) {
      out = (c_[k] < 0 ? "-" : "") + piece;
      first = false;
    } else {
      out += (c_[k] < 0 ? " - " : " + ") + piece;
    }
  }
  return first ? "0" : out;
}

// ---------------------------------------------------------------------------
// EMonom

static int pexp_total(const std::vector<std::pair<int, long>>& pexp) {
  long t = 0;
  for (auto& [i, e] : pexp) t += e;
  return static_cast<int>(t);
}

EMonom EMonom::operator*(const EMonom& o) const {
  EMonom out;
  size_t i = 0, j = 0;
  while (i < pexp.size() || j < o.pexp.size()) {
    if (j == o.pexp.size() || (i < pexp.size() && pexp[i].first < o.pexp[j].first)) {
      out.pexp.push_back(pexp[i++]);
    } else if (i == pexp.size() || o.pexp[j].first < pexp[i].first) {
      out.pexp.push_back(o.pexp[j++]);
    } else {
      long e = pexp[i].second + o.pexp[j].second;
      if (e != 0) out.pexp.emplace_back(pexp[i].first, e);
      ++i;
      ++j;
    }
  }
  out.eform = eform + o.eform;
  return out;
}

bool EMonom::param_divisible_by(const EMonom& o) const {
  for (const auto& [idx, e] : o.pexp) {
    long mine = 0;
    for (const auto& [i2, e2] : pexp)
      if (i2 == idx) mine = e2;
    if (mine < e) return false;
  }
  return true;
}

EMonom EMonom::divided_by(const EMonom& o) const {
  if (!param_divisible_by(o)) fail(Err::Internal, "monomial division not exact");
  EMonom inv;
  inv.pexp = o.pexp;
  for (auto& t : inv.pexp) t.second = -t.second;
  inv.eform = o.eform.negated();
  return *this * inv;
}

int EMonom::compare(const EMonom& o) const {
  int ta = pexp_total(pexp), tb = pexp_total(o.pexp);
  if (ta != tb) return ta < tb ? -1 : 1;
  size_t i = 0, j = 0;
  while (i < pexp.size() || j < o.pexp.size()) {
    int ia = i < pexp.size() ? pexp[i].first : INT32_MAX;
    int ib = j < o.pexp.size() ? o.pexp[j].first : INT32_MAX;
    if (ia < ib) return 1;   // this has a power of an earlier variable
    if (ib < ia) return -1;
    if (pexp[i].second != o.pexp[j].second)
      return pexp[i].second < o.pexp[j].second ? -1 : 1;
    ++i;
    ++j;
  }
  return eform.compare(o.eform);
}

// ---------------------------------------------------------------------------
// EPoly

EPoly EPoly::constant(const CycF& c) {
  EPoly p;
  if (!c.is_zero()) p.terms.push_back({EMonom{}, c});
  return p;
}

bool EPoly::is_constant() const {
  return terms.empty() || (terms.size() == 1 && terms[0].mon.is_one());
}

void EPoly::normalize() {
  std::sort(terms.begin(), terms.end(),
            [](const ETerm& a, const ETerm& b) { return a.mon.compare(b.mon) > 0; });
  std::vector<ETerm> out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().mon == t.mon)
      out.back().coeff = out.back().coeff + t.coeff;
    else
      out.push_back(t);
    if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
  }
  // a zero may hide mid-list if inputs were unsorted duplicates; filter again
  std::vector<ETerm> clean;
  for (auto& t : out)
    if (!t.coeff.is_zero()) clean.push_back(std::move(t));
  terms = std::move(clean);
}

EPoly EPoly::operator+(const EPoly& o) const {
  EPoly out;
  out.terms.reserve(terms.size() + o.terms.size());
  out.terms.insert(out.terms.end(), terms.begin(), terms.end());
  out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
  out.normalize();
  return out;
}

EPoly EPoly::negated() const {
  EPoly out = *this;
  for (auto& t : out.terms) t.coeff = t.coeff.negated();
  return out;
}

EPoly EPoly::operator-(const EPoly& o) const { return *this + o.negated(); }

EPoly EPoly::operator*(const EPoly& o) const {
  EPoly out;
  out.terms.reserve(terms.size() * o.terms.size());
  for (const auto& a : terms)
    for (const auto& b : o.terms)
      out.terms.push_back({a.mon * b.mon, a.coeff * b.coeff});
  out.normalize();
  return out;
}

bool EPoly::operator==(const EPoly& o) const {
  if (terms.size() != o.terms.size()) return false;
  for (size_t i = 0; i < terms.size(); ++i)
    if (!(terms[i].mon == o.terms[i].mon) || !(terms[i].coeff == o.terms[i].coeff))
      return false;
  return true;
}

std::string EPoly::str(const ParamTable& pt) const {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms) {
    std::string mon;
    for (const auto& [idx, e] : t.mon.pexp) {
      if (!mon.empty()) mon += "*";
      std::string name = idx >= 0 && idx < (int)pt.names.size() ? pt.names[idx]
                                                                : "s" + std::to_string(idx);
      mon += e == 1 ? name : name + "^" + std::to_string(e);
    }
    if (!t.mon.eform.is_zero()) {
      if (!mon.empty()) mon += "*";
      mon += "exp(" + t.mon.eform.str(pt) + ")";
    }
    std::string cs = t.coeff.str();
    bool sum_coeff = cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos;
    std::string piece;
    if (mon.empty()) {
      piece = cs;
    } else if (sum_coeff) {
      piece = "(" + cs + ")*" + mon;
    } else if (cs == "1") {
      piece = mon;
    } else if (cs == "-1") {
      piece = "-" + mon;
    } else {
      piece = cs + "*" + mon;
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
// Multivariate gcd over CycF (internal).  Exponential polynomials are mapped
// onto ordinary polynomials by scaling the rational exponent forms onto an
// integer lattice and shifting into the positive cone.

namespace {

struct MP {  // flat sparse multivariate poly over CycF, lex-sorted descending
  int width = 0;
  std::vector<std::pair<std::vector<long>, CycF>> t;

  bool is_zero() const { return t.empty(); }
  void normalize() {
    std::sort(t.begin(), t.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::pair<std::vector<long>, CycF>> out;
    for (auto& x : t) {
      if (!out.empty() && out.back().first == x.first)
        out.back().second = out.back().second + x.second;
      else
        out.push_back(x);
      if (!out.empty() && out.back().second.is_zero()) out.pop_back();
    }
    t.clear();
    for (auto& x : out)
      if (!x.second.is_zero()) t.push_back(std::move(x));
  }
};

MP mp_mul(const MP& a, const MP& b) {
  MP out;
  out.width = a.width;
  for (const auto& x : a.t)
    for (const auto& y : b.t) {
      std::vector<long> e = x.first;
      for (int i = 0; i < out.width; ++i) e[i] += y.first[i];
      out.t.emplace_back(std::move(e), x.second * y.second);
    }
  out.normalize();
  return out;
}

MP mp_sub(const MP& a, const MP& b) {
  MP out;
  out.width = a.width;
  out.t = a.t;
  for (const auto& y : b.t) out.t.emplace_back(y.first, y.second.negated());
  out.normalize();
  return out;
}

MP mp_scale(const MP& a, const CycF& c, const std::vector<long>& shift) {
  MP out;
  out.width = a.width;
  for (const auto& x : a.t) {
    std::vector<long> e = x.first;
    for (int i = 0; i < out.width; ++i) e[i] += shift[i];
    out.t.emplace_back(std::move(e), x.second * c);
  }
  out.normalize();
  return out;
}

MP mp_one(int width) {
  MP out;
  out.width = width;
  out.t.emplace_back(std::vector<long>(width, 0), CycF(1));
  return out;
}

// exact division; throws Internal if not exact
MP mp_div_exact(MP a, const MP& b) {
  if (b.is_zero()) fail(Err::Internal, "mp division by zero");
  MP q;
  q.width = a.width;
  while (!a.is_zero()) {
    const auto& la = a.t.front();
    const auto& lb = b.t.front();
    std::vector<long> e(a.width);
    for (int i = 0; i < a.width; ++i) {
      e[i] = la.first[i] - lb.first[i];
      if (e[i] < 0) fail(Err::Internal, "mp division not exact");
    }
    CycF c = la.second / lb.second;
    MP term;
    term.width = a.width;
    term.t.emplace_back(e, c);
    q.t.emplace_back(std::move(e), c);
    a = mp_sub(a, mp_mul(term, b));
  }
  q.normalize();
  return q;
}

int mp_deg(const MP& a, int v) {
  long d = 0;
  for (const auto& x : a.t) d = std::max(d, x.first[v]);
  return static_cast<int>(d);
}

// coefficient of x_v^k, with variable v removed from play (slot zeroed)
MP mp_coeff(const MP& a, int v, int k) {
  MP out;
  out.width = a.width;
  for (const auto& x : a.t)
    if (x.first[v] == k) {
      auto e = x.first;
      e[v] = 0;
      out.t.emplace_back(std::move(e), x.second);
    }
  out.normalize();
  return out;
}

MP mp_gcd(const MP& a, const MP& b);

MP mp_content(const MP& a, int v) {
  MP c;
  c.width = a.width;
  for (int k = 0; k <= mp_deg(a, v); ++k) {
    MP ck = mp_coeff(a, v, k);
    if (ck.is_zero()) continue;
    c = c.is_zero() ? ck : mp_gcd(c, ck);
  }
  return c;
}

// attach powers of v back: p * x_v^k
MP mp_shift_var(const MP& a, int v, int k) {
  std::vector<long> shift(a.width, 0);
  shift[v] = k;
  return mp_scale(a, CycF(1), shift);
}

MP mp_prem(const MP& a, const MP& b, int v) {
  int db = mp_deg(b, v);
  MP lb = mp_coeff(b, v, db);
  MP r = a;
  while (!r.is_zero()) {
    int dr = mp_deg(r, v);
    if (dr < db) break;
    MP lr = mp_coeff(r, v, dr);
    // r <- lb * r - lr * x^(dr-db) * b
    r = mp_sub(mp_mul(lb, r), mp_mul(mp_shift_var(lr, v, dr - db), b));
  }
  return r;
}

int mp_max_var(const MP& a) {
  for (int v = a.width - 1; v >= 0; --v)
    for (const auto& x : a.t)
      if (x.first[v] != 0) return v;
  return -1;
}

MP mp_gcd(const MP& a, const MP& b) {
  if (a.is_zero() && b.is_zero()) return mp_one(a.width);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  int v = std::max(mp_max_var(a), mp_max_var(b));
  if (v < 0) return mp_one(a.width);
  MP ca = mp_content(a, v), cb = mp_content(b, v);
  MP pa = mp_div_exact(a, ca), pb = mp_div_exact(b, cb);
  MP c = mp_gcd(ca, cb);
  MP r0 = pa, r1 = pb;
  if (mp_deg(r0, v) < mp_deg(r1, v)) std::swap(r0, r1);
  while (!r1.is_zero()) {
    MP r2 = mp_prem(r0, r1, v);
    if (!r2.is_zero()) r2 = mp_div_exact(r2, mp_content(r2, v));
    r0 = std::move(r1);
    r1 = std::move(r2);
  }
  MP g = mp_mul(c, mp_div_exact(r0, mp_content(r0, v)));
  // normalize: leading coefficient 1
  if (!g.is_zero() && !g.t.front().second.is_one()) {
    CycF inv = g.t.front().second.inverse();
    g = mp_scale(g, inv, std::vector<long>(g.width, 0));
  }
  return g;
}

struct Atlas {
  std::vector<int> params;   // occurring parameter indices
  std::vector<int> symbols;  // occurring exponent-symbol indices
  std::vector<Int> scale;    // per symbol: common denominator
  std::vector<long> shift;   // per symbol: min scaled exponent over all inputs
  int width() const { return static_cast<int>(params.size() + symbols.size()); }
};

void atlas_scan(const EPoly& p, std::vector<int>& params, std::vector<int>& symbols,
                std::map<int, Int>& denlcm) {
  for (const auto& t : p.terms) {
    for (const auto& [i, e] : t.mon.pexp)
      if (std::find(params.begin(), params.end(), i) == params.end()) params.push_back(i);
    for (const auto& [i, c] : t.mon.eform.terms) {
      if (std::find(symbols.begin(), symbols.end(), i) == symbols.end()) symbols.push_back(i);
      Int d = c.get_den();
      auto it = denlcm.find(i);
      if (it == denlcm.end())
        denlcm[i] = d;
      else {
        Int l;
        mpz_lcm(l.get_mpz_t(), it->second.get_mpz_t(), d.get_mpz_t());
        it->second = l;
      }
    }
  }
}

Atlas build_atlas(const EPoly& a, const EPoly& b) {
  Atlas at;
  std::map<int, Int> denlcm;
  atlas_scan(a, at.params, at.symbols, denlcm);
  atlas_scan(b, at.params, at.symbols, denlcm);
  std::sort(at.params.begin(), at.params.end());
  std::sort(at.symbols.begin(), at.symbols.end());
  at.scale.resize(at.symbols.size());
  at.shift.assign(at.symbols.size(), 0);
  for (size_t s = 0; s < at.symbols.size(); ++s) at.scale[s] = denlcm[at.symbols[s]];
  // min scaled exponent per symbol over both polys
  auto scan_min = [&](const EPoly& p) {
    for (const auto& t : p.terms)
      for (size_t s = 0; s < at.symbols.size(); ++s) {
        Rat c(0);
        for (const auto& [i, cc] : t.mon.eform.terms)
          if (i == at.symbols[s]) c = cc;
        Rat scaled = c * Rat(at.scale[s]);
        at.shift[s] = std::min(at.shift[s], scaled.get_num().get_si());
      }
  };
  scan_min(a);
  scan_min(b);
  return at;
}

MP to_mp(const EPoly& p, const Atlas& at) {
  MP out;
  out.width = at.width();
  for (const auto& t : p.terms) {
    std::vector<long> e(out.width, 0);
    for (const auto& [i, pe] : t.mon.pexp) {
      auto it = std::find(at.params.begin(), at.params.end(), i);
      e[it - at.params.begin()] = pe;
    }
    for (size_t s = 0; s < at.symbols.size(); ++s) {
      Rat c(0);
      for (const auto& [i, cc] : t.mon.eform.terms)
        if (i == at.symbols[s]) c = cc;
      Rat scaled = c * Rat(at.scale[s]);
      e[at.params.size() + s] = scaled.get_num().get_si() - at.shift[s];
    }
    out.t.emplace_back(std::move(e), t.coeff);
  }
  out.normalize();
  return out;
}

EPoly from_mp(const MP& p, const Atlas& at, bool apply_shift) {
  EPoly out;
  for (const auto& x : p.t) {
    EMonom m;
    for (size_t i = 0; i < at.params.size(); ++i)
      if (x.first[i] != 0) m.pexp.emplace_back(at.params[i], x.first[i]);
    for (size_t s = 0; s < at.symbols.size(); ++s) {
      long v = x.first[at.params.size() + s] + (apply_shift ? at.shift[s] : 0);
      if (v != 0) {
        Rat c = Rat(v) / Rat(at.scale[s]);
        m.eform.terms.emplace_back(at.symbols[s], c);
      }
    }
    std::sort(m.eform.terms.begin(), m.eform.terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.terms.push_back({std::move(m), x.second});
  }
  out.normalize();
  return out;
}

}  // namespace

EPoly epoly_gcd(const EPoly& a, const EPoly& b) {
  Atlas at = build_atlas(a, b);
  MP g = mp_gcd(to_mp(a, at), to_mp(b, at));
  return from_mp(g, at, false);
}

// Divide num and den by their gcd, in a shared atlas (shifts cancel).
static void reduce_fraction(EPoly& num, EPoly& den) {
  Atlas at = build_atlas(num, den);
  MP mn = to_mp(num, at), md = to_mp(den, at);
  MP g = mp_gcd(mn, md);
  bool trivial = g.t.size() == 1 && g.t.front().second.is_one() &&
                 std::all_of(g.t.front().first.begin(), g.t.front().first.end(),
                             [](long e) { return e == 0; });
  if (!trivial) {
    mn = mp_div_exact(mn, g);
    md = mp_div_exact(md, g);
  }
  num = from_mp(mn, at, true);
  den = from_mp(md, at, true);
}

// ---------------------------------------------------------------------------
// ExpUnit

ExpUnit ExpUnit::operator*(const ExpUnit& o) const {
  ExpUnit out;
  out.exponent = exponent + o.exponent;
  if (order == 1) {
    out.order = o.order;
    out.root = o.root;
  } else if (o.order == 1) {
    out.order = order;
    out.root = root;
  } else if (order == o.order) {
    out.order = order;
    out.root = (root + o.root) % order;
  } else {
    fail(Err::SchemaError, "mixed cyclotomic orders in unit product");
  }
  if (out.order == 1) out.root = 0;
  return out;
}

ExpUnit ExpUnit::pow(long n) const {
  ExpUnit out;
  out.exponent = exponent.scaled(Rat(n));
  out.order = order;
  out.root = order == 1 ? 0 : ((root * (n % order)) % order + order) % order;
  return out;
}

ExpUnit ExpUnit::pow(const Rat& r) const {
  ExpUnit out;
  out.exponent = exponent.scaled(r);
  out.order = order;
  if (order == 1 || root == 0) {
    out.root = 0;
    out.order = order;
    return out;
  }
  // zeta^(root * r) must land back in the group generated by zeta
  Rat k = Rat(root) * r;
  if (k.get_den() != 1)
    fail(Err::SchemaError, "fractional power of a root of unity is not representable");
  long ki = static_cast<long>(mpz_get_si(k.get_num().get_mpz_t()));
  out.root = ((ki % order) + order) % order;
  return out;
}

bool ExpUnit::is_one() const { return exponent.is_zero() && (order == 1 || root % order == 0); }

bool ExpUnit::operator==(const ExpUnit& o) const {
  if (!(exponent == o.exponent)) return false;
  long ra = order == 1 ? 0 : root, rb = o.order == 1 ? 0 : o.root;
  if (ra == 0 && rb == 0) return true;
  return order == o.order && ra == rb;
}

std::string ExpUnit::str(const ParamTable& pt) const {
  std::string out;
  if (!exponent.is_zero()) out = "exp(" + exponent.str(pt) + ")";
  if (order > 1 && root % order != 0) {
    if (!out.empty()) out += "*";
    out += root == 1 ? "zeta" : "zeta^" + std::to_string(root);
  }
  return out.empty() ? "1" : out;
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(long v) : num_(EPoly::constant(CycF(v))), den_(EPoly::constant(CycF(1))) {}
Scalar::Scalar(const Rat& r) : num_(EPoly::constant(CycF(r))), den_(EPoly::constant(CycF(1))) {}
Scalar::Scalar(const CycF& c) : num_(EPoly::constant(c)), den_(EPoly::constant(CycF(1))) {}

Scalar Scalar::param(int index) {
  Scalar s;
  EMonom m;
  m.pexp.emplace_back(index, 1);
  s.num_.terms.push_back({m, CycF(1)});
  return s;
}

Scalar Scalar::unit(const ExpUnit& u) {
  Scalar s;
  EMonom m;
  m.eform = u.exponent;
  CycF c = u.order == 1 ? CycF(1) : CycF::zeta_pow(u.order, u.root);
  s.num_.terms.push_back({m, c});
  s.num_.normalize();
  return s;
}

Scalar Scalar::zeta(long order, long k) {
  ExpUnit u;
  u.order = order;
  u.root = ((k % order) + order) % order;
  return unit(u);
}

static bool epoly_is_literal_one(const EPoly& p) {
  return p.terms.size() == 1 && p.terms[0].mon.is_one() && p.terms[0].coeff.is_one();
}

// If den is a single term whose parameter part divides every num term, fold
// it into num and set den = 1.
static bool try_fold_single(EPoly& num, EPoly& den) {
  if (den.terms.size() != 1) return false;
  const ETerm& d = den.terms[0];
  bool divisible = std::all_of(num.terms.begin(), num.terms.end(), [&](const ETerm& t) {
    return t.mon.param_divisible_by(d.mon);
  });
  if (!divisible) return false;
  EPoly out;
  CycF dinv = d.coeff.inverse();
  for (const auto& t : num.terms)
    out.terms.push_back({t.mon.divided_by(d.mon), t.coeff * dinv});
  out.normalize();
  num = std::move(out);
  den = EPoly::constant(CycF(1));
  return true;
}

void Scalar::normalize() {
  if (num_.is_zero()) {
    den_ = EPoly::constant(CycF(1));
    return;
  }
  if (den_.is_zero()) fail(Err::Internal, "scalar with zero denominator");
  if (epoly_is_literal_one(den_)) return;
  if (try_fold_single(num_, den_)) return;

  reduce_fraction(num_, den_);
  if (epoly_is_literal_one(den_)) return;
  if (try_fold_single(num_, den_)) return;

  // canonical representative: shift the denominator's exponent forms so its
  // per-symbol minimum is zero, and scale its leading coefficient to 1
  std::map<int, Rat> minexp;
  for (const auto& t : den_.terms)
    for (const auto& [i, c] : t.mon.eform.terms)
      minexp.emplace(i, Rat(0));
  for (auto& [i, m] : minexp) {
    bool first = true;
    for (const auto& t : den_.terms) {
      Rat c(0);
      for (const auto& [j, cc] : t.mon.eform.terms)
        if (j == i) c = cc;
      if (first || c < m) m = c;
      first = false;
    }
  }
  if (!minexp.empty()) {
    LinForm s;
    for (auto& [i, m] : minexp)
      if (m != 0) s.terms.emplace_back(i, m);
    if (!s.is_zero()) {
      EMonom shift;
      shift.eform = s.negated();
      EPoly sh;
      sh.terms.push_back({shift, CycF(1)});
      num_ = num_ * sh;
      den_ = den_ * sh;
    }
  }
  const CycF lead = den_.terms.front().coeff;
  if (!lead.is_one()) {
    CycF inv = lead.inverse();
    for (auto& t : num_.terms) t.coeff = t.coeff * inv;
    for (auto& t : den_.terms) t.coeff = t.coeff * inv;
  }
}

bool Scalar::is_one() const {
  return epoly_is_literal_one(num_) && epoly_is_literal_one(den_);
}

bool Scalar::operator==(const Scalar& o) const {
  if (den_ == o.den_) return num_ == o.num_;
  return num_ * o.den_ == o.num_ * den_;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar out;
  if (epoly_is_literal_one(den_) && epoly_is_literal_one(o.den_)) {
    out.num_ = num_ + o.num_;
    out.den_ = den_;
    return out;
  }
  out.num_ = num_ * o.den_ + o.num_ * den_;
  out.den_ = den_ * o.den_;
  out.normalize();
  return out;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + o.negated(); }

Scalar Scalar::negated() const {
  Scalar out = *this;
  out.num_ = out.num_.negated();
  return out;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar out;
  out.num_ = num_ * o.num_;
  if (epoly_is_literal_one(den_) && epoly_is_literal_one(o.den_)) {
    out.den_ = den_;
    return out;
  }
  out.den_ = den_ * o.den_;
  out.normalize();
  return out;
}

Scalar Scalar::inverse() const {
  if (is_zero()) fail(Err::DivisionByZero, "division by zero scalar");
  Scalar out;
  out.num_ = den_;
  out.den_ = num_;
  out.normalize();
  return out;
}

Scalar Scalar::operator/(const Scalar& o) const {
  if (o.is_zero()) fail(Err::DivisionByZero, "division by zero scalar");
  Scalar out;
  out.num_ = num_ * o.den_;
  out.den_ = den_ * o.num_;
  out.normalize();
  return out;
}

Scalar Scalar::pow(long n) const {
  if (n == 0) return Scalar(1);
  Scalar base = n < 0 ? inverse() : *this;
  unsigned long e = n < 0 ? -static_cast<unsigned long>(n) : n;
  Scalar acc(1);
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

std::optional<Rat> Scalar::as_rational() const {
  if (!epoly_is_literal_one(den_)) return std::nullopt;
  if (num_.is_zero()) return Rat(0);
  if (num_.terms.size() != 1 || !num_.terms[0].mon.is_one()) return std::nullopt;
  return num_.terms[0].coeff.as_rational();
}

std::optional<ExpUnit> Scalar::as_unit() const {
  if (!epoly_is_literal_one(den_)) return std::nullopt;
  if (num_.terms.size() != 1) return std::nullopt;
  const ETerm& t = num_.terms[0];
  if (!t.mon.pexp.empty()) return std::nullopt;
  auto k = t.coeff.as_zeta_power();
  if (!k) return std::nullopt;
  ExpUnit u;
  u.exponent = t.mon.eform;
  u.order = t.coeff.order();
  u.root = *k;
  if (u.order == 1) u.root = 0;
  return u;
}

std::optional<LinForm> Scalar::as_exponent_form() const {
  if (!epoly_is_literal_one(den_)) return std::nullopt;
  LinForm out;
  for (const auto& t : num_.terms) {
    if (!t.mon.eform.is_zero()) return std::nullopt;
    auto r = t.coeff.as_rational();
    if (!r) return std::nullopt;
    if (t.mon.pexp.empty()) return std::nullopt;  // nonzero constant term
    if (t.mon.pexp.size() != 1 || t.mon.pexp[0].second != 1) return std::nullopt;
    out.terms.emplace_back(t.mon.pexp[0].first, *r);
  }
  std::sort(out.terms.begin(), out.terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::string Scalar::str(const ParamTable& pt) const {
  if (epoly_is_literal_one(den_)) return num_.str(pt);
  std::string n = num_.str(pt);
  if (num_.terms.size() > 1) n = "(" + n + ")";
  return n + " / (" + den_.str(pt) + ")";
}

}  // namespace twist::scalars
