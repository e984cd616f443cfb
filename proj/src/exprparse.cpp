#include "twist/exprparse.hpp"

#include <cctype>
#include <utility>
#include <vector>

#include "twist/error.hpp"

namespace twist::cli {

using hopf::Element;
using hopf::GroupData;
using hopf::Monomial;
using scalars::ExpUnit;
using scalars::LinForm;
using scalars::Rat;
using scalars::Scalar;
using twistalg::Letter;
using twistalg::Word;

namespace {

enum class Tok { Int, Name, Plus, Minus, Star, Caret, Slash, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int col = 0;  // 1-based
};

[[noreturn]] void syntax(const std::string& msg, int col) {
  fail(Err::SyntaxError, msg + " (column " + std::to_string(col) + ")");
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    int col = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      out.push_back({Tok::Name, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '^': k = Tok::Caret; break;
      case '/': k = Tok::Slash; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default:
        syntax(std::string("unexpected character '") + c + "'", col);
    }
    out.push_back({k, std::string(1, c), col});
    ++i;
  }
  out.push_back({Tok::End, "", static_cast<int>(s.size()) + 1});
  return out;
}

long to_long(const Token& t) {
  try {
    return std::stol(t.text);
  } catch (...) {
    syntax("integer literal '" + t.text + "' out of range", t.col);
  }
}

Rat big_rat(const std::string& digits) { return Rat(scalars::Int(digits)); }

// Shared recursive-descent core.  Values are Elements over g; pure-scalar
// contexts pass a variable-free g so every value stays a constant.
class Parser {
 public:
  Parser(const std::string& text, const GroupData& g)
      : g_(g), toks_(lex(text)) {}

  Element parse_expression() {
    Element v = expr();
    finish();
    return v;
  }

  Word parse_free_word() {
    Word w;
    bool sep_ok = true;  // '*' separators are optional
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Star) {
        if (sep_ok) syntax("unexpected '*'", peek().col);
        advance();
        sep_ok = true;
        continue;
      }
      w.push_back(letter());
      sep_ok = false;
    }
    return w;
  }

 private:
  const GroupData& g_;
  std::vector<Token> toks_;
  size_t at_ = 0;

  const Token& peek() const { return toks_[at_]; }
  Token advance() { return toks_[at_++]; }
  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k)
      syntax("expected " + what + " before '" +
                 (peek().kind == Tok::End ? std::string("end of input") : peek().text) +
                 "'",
             peek().col);
    return advance();
  }

  void finish() {
    if (peek().kind == Tok::End) return;
    if (peek().kind == Tok::Slash)
      syntax("'/' is only allowed inside a rational literal; use parentheses, "
             "as in q^(1/2)",
             peek().col);
    syntax("unexpected '" + peek().text + "' (adjacent factors need '*')",
           peek().col);
  }

  Element one() const { return Element::unit(g_.k(), g_.m()); }
  Element constant(const Scalar& s) const {
    return Element::monomial(Monomial::one(g_.k(), g_.m()), s);
  }

  Element expr() {
    Element v = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      Tok op = advance().kind;
      Element r = term();
      v = (op == Tok::Plus) ? v + r : v - r;
    }
    return v;
  }

  Element term() {
    Element v = factor();
    while (peek().kind == Tok::Star) {
      advance();
      v = v * factor();
    }
    return v;
  }

  Element factor() {
    if (peek().kind == Tok::Minus) {
      advance();
      return factor().negated();
    }
    Element base = atom();
    if (peek().kind != Tok::Caret) return base;
    int caret_col = advance().col;
    auto [num, den] = exponent();
    return power(base, num, den, caret_col);
  }

  // Returns the exponent as num/den with den >= 1.
  std::pair<long, long> exponent() {
    bool neg = false;
    if (peek().kind == Tok::Minus) {
      advance();
      neg = true;
    }
    if (peek().kind == Tok::Int) {
      Token t = advance();
      if (peek().kind == Tok::Slash)
        syntax("ambiguous exponent: write q^(" + std::string(neg ? "-" : "") +
                   t.text + "/...) with parentheses",
               peek().col);
      long v = to_long(t);
      return {neg ? -v : v, 1};
    }
    if (peek().kind == Tok::LParen) {
      advance();
      bool inner_neg = neg;
      if (peek().kind == Tok::Minus) {
        advance();
        inner_neg = !inner_neg;
      }
      long num = to_long(expect(Tok::Int, "an integer exponent"));
      long den = 1;
      if (peek().kind == Tok::Slash) {
        advance();
        den = to_long(expect(Tok::Int, "a denominator"));
        if (den == 0) syntax("zero denominator in exponent", peek().col);
      }
      expect(Tok::RParen, "')'");
      return {inner_neg ? -num : num, den};
    }
    syntax("expected an integer exponent after '^'", peek().col);
  }

  Element power(const Element& base, long num, long den, int col) {
    if (den != 1) {
      Rat r(num);
      r /= den;
      r.canonicalize();
      if (r.get_den() == 1) return power(base, r.get_num().get_si(), 1, col);
      return fractional_power(base, r, col);
    }
    if (num == 0) return one();
    Element b = base;
    long e = num;
    if (e < 0) {
      b = inverted(base, col);
      e = -e;
    }
    Element acc = one();
    Element sq = b;
    while (e > 0) {  // binary powering
      if (e & 1) acc = acc * sq;
      e >>= 1;
      if (e) sq = sq * sq;
    }
    return acc;
  }

  Element inverted(const Element& base, int col) {
    if (base.is_zero()) fail(Err::DivisionByZero, "zero base with negative exponent");
    if (base.terms.size() != 1)
      fail(Err::SchemaError,
           "only single monomials can carry negative exponents (column " +
               std::to_string(col) + ")");
    const auto& [mon, coeff] = base.terms[0];
    for (long b : mon.beta)
      if (b != 0)
        fail(Err::SchemaError,
             "filtered variables are not invertible (column " +
                 std::to_string(col) + ")");
    Monomial inv = mon;
    for (long& a : inv.alpha) a = -a;
    return Element::monomial(inv, coeff.inverse());
  }

  Element fractional_power(const Element& base, const Rat& r, int col) {
    if (base.terms.size() == 1 && base.terms[0].first.is_one()) {
      if (auto u = base.terms[0].second.as_unit())
        return constant(Scalar::unit(u->pow(r)));
    }
    fail(Err::SchemaError,
         "fractional exponents need an invertible unit base (column " +
             std::to_string(col) + ")");
  }

  Element atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        Token n = advance();
        Rat v = big_rat(n.text);
        if (peek().kind == Tok::Slash) {
          advance();
          Token d = expect(Tok::Int, "a denominator");
          Rat dv = big_rat(d.text);
          if (dv == 0) syntax("zero denominator", d.col);
          v /= dv;
        }
        return constant(Scalar(v));
      }
      case Tok::LParen: {
        advance();
        Element v = expr();
        expect(Tok::RParen, "')'");
        return v;
      }
      case Tok::Name:
        return name_atom(advance());
      default:
        syntax("expected a value before '" +
                   (t.kind == Tok::End ? std::string("end of input") : t.text) + "'",
               t.col);
    }
  }

  Element name_atom(const Token& t) {
    if (t.text == "exp") {
      expect(Tok::LParen, "'(' after exp");
      Element arg = expr();
      expect(Tok::RParen, "')'");
      Scalar s = constant_scalar(arg, t.col);
      auto form = s.as_exponent_form();
      if (!form)
        fail(Err::SchemaError,
             "exp argument must be a rational-linear form in the parameters "
             "(column " +
                 std::to_string(t.col) + ")");
      return constant(Scalar::unit(ExpUnit{*form, 1, 0}));
    }
    if (t.text == "zeta") {
      long n = g_.params.cyclotomic_order;
      if (n <= 1)
        fail(Err::UnknownName,
             "'zeta' needs a declared cyclotomic order (column " +
                 std::to_string(t.col) + ")");
      return constant(Scalar::zeta(n));
    }
    int pi = g_.params.index_of(t.text);
    if (pi >= 0) return constant(Scalar::param(pi));
    for (int i = 0; i < g_.k(); ++i)
      if (g_.xnames[i] == t.text) return Element::monomial(g_.xgen(i));
    for (int j = 0; j < g_.m(); ++j)
      if (g_.znames[j] == t.text) return Element::monomial(g_.zgen(j));
    fail(Err::UnknownName,
         "name '" + t.text + "' is not declared (column " + std::to_string(t.col) +
             ")");
  }

  Scalar constant_scalar(const Element& e, int col) {
    if (e.is_zero()) return Scalar(0);
    if (e.terms.size() == 1 && e.terms[0].first.is_one()) return e.terms[0].second;
    fail(Err::SchemaError,
         "expected a constant scalar expression (column " + std::to_string(col) +
             ")");
  }

  Letter letter() {
    Token t = expect(Tok::Name, "a generator name");
    Letter l;
    bool found = false;
    for (int i = 0; i < g_.k() && !found; ++i)
      if (g_.xnames[i] == t.text) {
        l = Letter{true, i, 1};
        found = true;
      }
    for (int j = 0; j < g_.m() && !found; ++j)
      if (g_.znames[j] == t.text) {
        l = Letter{false, j, 1};
        found = true;
      }
    if (!found)
      fail(Err::UnknownName, "name '" + t.text + "' is not declared (column " +
                                 std::to_string(t.col) + ")");
    if (peek().kind == Tok::Caret) {
      int col = advance().col;
      auto [num, den] = exponent();
      if (den != 1)
        fail(Err::SchemaError,
             "word letters need integer powers (column " + std::to_string(col) +
                 ")");
      if (!l.torus && num < 0)
        fail(Err::SchemaError,
             "filtered variables are not invertible (column " +
                 std::to_string(col) + ")");
      l.power = num;
    }
    return l;
  }
};

GroupData scalar_scope(const scalars::ParamTable& pt) {
  GroupData g;
  g.params = pt;
  return g;
}

}  // namespace

Element parse_element(const std::string& text, const GroupData& g) {
  return Parser(text, g).parse_expression();
}

Scalar parse_scalar(const std::string& text, const scalars::ParamTable& pt) {
  GroupData g = scalar_scope(pt);
  Element e = Parser(text, g).parse_expression();
  if (e.is_zero()) return Scalar(0);
  return e.terms[0].second;
}

Word parse_word(const std::string& text, const GroupData& g) {
  Word w = Parser(text, g).parse_free_word();
  Word out;
  for (const Letter& l : w)
    if (l.power != 0) out.push_back(l);
  return out;
}

}  // namespace twist::cli
