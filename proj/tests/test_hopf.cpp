#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "twist/hopf.hpp"

using namespace twist;
using namespace twist::hopf;
using scalars::Rat;
using scalars::Scalar;

namespace {

Rat frac(long p, long q) {
  Rat r(p);
  r /= q;
  return r;
}

// unipotent upper-triangular 3x3 group: x, y primitive, Delta z = z(x)1 + 1(x)z + x(x)y
GroupData heisenberg() {
  GroupData g;
  g.znames = {"x", "y", "z"};
  g.zdeg = {1, 1, 2};
  g.zcorr.resize(3);
  g.zcorr[2].push_back({Element::monomial(g.zgen(0)), Element::monomial(g.zgen(1))});
  return g;
}

// rank-2 torus, no filtered part
GroupData torus2() {
  GroupData g;
  g.xnames = {"x", "y"};
  return g;
}

// ax+b group: torus variable x, filtered y with Delta y = y(x)1 + 1(x)y + y(x)(x-1)
GroupData borel() {
  GroupData g;
  g.xnames = {"x"};
  g.znames = {"y"};
  g.zdeg = {1};
  g.zcorr.resize(1);
  g.extended = true;
  Element xm1 = Element::monomial(g.xgen(0)) +
                Element::monomial(Monomial::one(1, 1), Scalar(-1));
  g.zcorr[0].push_back({Element::monomial(g.zgen(0)), xm1});
  return g;
}

// unipotent upper-triangular 4x4 group, six coordinates above the diagonal
GroupData u4() {
  GroupData g;
  g.znames = {"g12", "g23", "g34", "g13", "g24", "g14"};
  g.zdeg = {1, 1, 1, 2, 2, 3};
  g.zcorr.resize(6);
  auto zel = [&](int j) { return Element::monomial(g.zgen(j)); };
  g.zcorr[3].push_back({zel(0), zel(1)});               // g13: g12 (x) g23
  g.zcorr[4].push_back({zel(1), zel(2)});               // g24: g23 (x) g34
  g.zcorr[5].push_back({zel(0), zel(4)});               // g14: g12 (x) g24
  g.zcorr[5].push_back({zel(3), zel(2)});               //      + g13 (x) g34
  return g;
}

Monomial random_monomial(const GroupData& g, std::mt19937& rng, int zbudget) {
  Monomial mon = Monomial::one(g.k(), g.m());
  for (int i = 0; i < g.k(); ++i) mon.alpha[i] = static_cast<long>(rng() % 5) - 2;
  for (int j = 0; j < g.m() && zbudget > 0; ++j) {
    long e = rng() % 3;
    long cost = e * g.zdeg[j];
    if (cost <= zbudget) {
      mon.beta[j] = e;
      zbudget -= cost;
    }
  }
  return mon;
}

Element random_element(const GroupData& g, std::mt19937& rng) {
  Element e;
  int nterms = 1 + rng() % 3;
  for (int t = 0; t < nterms; ++t) {
    long num = static_cast<long>(rng() % 7) - 3;
    if (num == 0) num = 1;
    e = e + Element::monomial(random_monomial(g, rng, 4), Scalar(frac(num, 1 + rng() % 3)));
  }
  return e;
}

Element apply_counit_leg(const Tensor& t, int leg) {
  Element out;
  for (const auto& term : t.terms) {
    Scalar c = term.coeff * counit_monomial(term.legs[leg]);
    out = out + Element::monomial(term.legs[1 - leg], c);
  }
  return out;
}

}  // namespace

TEST_CASE("validation accepts the built-in group data") {
  CHECK(validate_hopf(heisenberg()).ok());
  CHECK(validate_hopf(torus2()).ok());
  CHECK(validate_hopf(borel()).ok());
  CHECK(validate_hopf(u4()).ok());
}

TEST_CASE("validation rejects corrupted data with witnesses") {
  // Z = x (x) 1: the right leg has nonzero counit
  GroupData bad = heisenberg();
  bad.zcorr[2] = {{Element::monomial(bad.zgen(0)), Element::unit(0, 3)}};
  auto rep = validate_hopf(bad);
  REQUIRE_FALSE(rep.ok());
  bool saw = false;
  for (const auto& f : rep.failures)
    if (f.axiom == "leg-augmentation" && f.witness.find("z") != std::string::npos) saw = true;
  CHECK(saw);

  // self-reference in strict mode
  GroupData self = heisenberg();
  self.zcorr[2] = {{Element::monomial(self.zgen(2)), Element::monomial(self.zgen(1))}};
  CHECK_FALSE(validate_hopf(self).ok());

  // mirrored correction: the right leg carries full weight
  GroupData mirror = borel();
  Element xm1 = Element::monomial(mirror.xgen(0)) +
                Element::monomial(Monomial::one(1, 1), Scalar(-1));
  mirror.zcorr[0] = {{xm1, Element::monomial(mirror.zgen(0))}};
  auto mrep = validate_hopf(mirror);
  REQUIRE_FALSE(mrep.ok());
  CHECK(mrep.failures[0].axiom == "filtration");

  // full-weight left leg that is not the variable itself
  GroupData shifted = borel();
  Monomial xy = Monomial::one(1, 1);
  xy.alpha[0] = 1;
  xy.beta[0] = 1;
  shifted.zcorr[0] = {{Element::monomial(xy), xm1}};
  auto srep = validate_hopf(shifted);
  REQUIRE_FALSE(srep.ok());
  CHECK(srep.failures[0].axiom == "filtration");

  // full-weight left leg whose companion is not torus-only
  GroupData comp = borel();
  Element ym = Element::monomial(comp.zgen(0));
  comp.zcorr[0] = {{ym, ym}};
  CHECK_FALSE(validate_hopf(comp).ok());

  // degree pattern violation: first filtered variable of degree 2
  GroupData deg = heisenberg();
  deg.zdeg = {2, 1, 2};
  CHECK_FALSE(validate_hopf(deg).ok());
}

TEST_CASE("coproducts of the Heisenberg coordinates") {
  GroupData g = heisenberg();
  EvalContext ctx(g);
  Element z = Element::monomial(g.zgen(2));

  Tensor dz = ctx.coproduct(z);
  CHECK(dz.terms.size() == 3);

  // z^2 -> z^2(x)1 + 2z(x)z + 1(x)z^2 + 2zx(x)y + 2x(x)yz + x^2(x)y^2
  Tensor dz2 = ctx.coproduct(z * z);
  REQUIRE(dz2.terms.size() == 6);
  Monomial one = Monomial::one(0, 3);
  auto mono = [&](long bx, long by, long bz) {
    Monomial mon = one;
    mon.beta = {bx, by, bz};
    return mon;
  };
  Tensor expected;
  expected.nlegs = 2;
  expected.terms.push_back({{mono(0, 0, 2), one}, Scalar(1)});
  expected.terms.push_back({{mono(0, 0, 1), mono(0, 0, 1)}, Scalar(2)});
  expected.terms.push_back({{one, mono(0, 0, 2)}, Scalar(1)});
  expected.terms.push_back({{mono(1, 0, 1), mono(0, 1, 0)}, Scalar(2)});
  expected.terms.push_back({{mono(1, 0, 0), mono(0, 1, 1)}, Scalar(2)});
  expected.terms.push_back({{mono(2, 0, 0), mono(0, 2, 0)}, Scalar(1)});
  expected.normalize();
  CHECK(dz2 == expected);
}

TEST_CASE("iterated coproducts agree in both expansion orders") {
  GroupData g = heisenberg();
  EvalContext ctx(g);
  Element z = Element::monomial(g.zgen(2));
  Tensor dz = ctx.coproduct(z);
  Tensor left = ctx.expand_leg(dz, 0);
  Tensor right = ctx.expand_leg(dz, 1);
  CHECK(left == right);
  CHECK(left.terms.size() == 6);
  CHECK(ctx.iterated_coproduct(z, 3) == left);

  GroupData g4 = u4();
  EvalContext ctx4(g4);
  Element g14 = Element::monomial(g4.zgen(5));
  Tensor d = ctx4.coproduct(g14);
  CHECK(d.terms.size() == 4);
  Tensor l4 = ctx4.expand_leg(d, 0);
  Tensor r4 = ctx4.expand_leg(d, 1);
  CHECK(l4 == r4);
  CHECK(l4.terms.size() == 10);
}

TEST_CASE("grouplike torus monomials") {
  GroupData g = torus2();
  EvalContext ctx(g);
  Monomial mon = Monomial::one(2, 0);
  mon.alpha = {2, -1};
  Tensor d = ctx.coproduct(Element::monomial(mon));
  REQUIRE(d.terms.size() == 1);
  CHECK(d.terms[0].legs[0] == mon);
  CHECK(d.terms[0].legs[1] == mon);
  Tensor d3 = ctx.iterated_coproduct(Element::monomial(g.xgen(0)), 3);
  REQUIRE(d3.terms.size() == 1);
  CHECK(d3.terms[0].legs.size() == 3);
}

TEST_CASE("counit evaluates at the identity") {
  GroupData gt = torus2();
  Monomial mon = Monomial::one(2, 0);
  mon.alpha = {3, -2};
  CHECK(counit(gt, Element::monomial(mon)).is_one());

  GroupData gh = heisenberg();
  Element z = Element::monomial(gh.zgen(2));
  Element e = z + Element::monomial(Monomial::one(0, 3), Scalar(frac(1, 2)));
  CHECK(counit(gh, e) == Scalar(frac(1, 2)));
  CHECK(counit(gh, Element::zero()).is_zero());
}

TEST_CASE("commutative product") {
  GroupData g = torus2();
  Monomial xinv = Monomial::one(2, 0);
  xinv.alpha = {-1, 0};
  Element x = Element::monomial(g.xgen(0));
  Element y = Element::monomial(g.xgen(1));
  CHECK(commutative_product(x, Element::monomial(xinv)) == Element::unit(2, 0));
  Element sq = (x + y) * (x + y);
  CHECK(sq == x * x + x * y.scaled(Scalar(2)) + y * y);

  GroupData gh = heisenberg();
  Element zy = Element::monomial(gh.zgen(2)) * Element::monomial(gh.zgen(1));
  Element yz = Element::monomial(gh.zgen(1)) * Element::monomial(gh.zgen(2));
  CHECK(zy == yz);
}

TEST_CASE("counit and coassociativity properties on random elements") {
  std::mt19937 rng(4242);
  for (const GroupData& g : {heisenberg(), borel(), u4()}) {
    EvalContext ctx(g);
    for (int trial = 0; trial < 34; ++trial) {
      Element e = random_element(g, rng);
      Tensor d = ctx.coproduct(e);
      CHECK(apply_counit_leg(d, 0) == e);
      CHECK(apply_counit_leg(d, 1) == e);
    }
    for (int trial = 0; trial < 17; ++trial) {
      Element e = random_element(g, rng);
      Tensor d = ctx.coproduct(e);
      CHECK(ctx.expand_leg(d, 0) == ctx.expand_leg(d, 1));
    }
  }
}

TEST_CASE("coproduct is an algebra map") {
  std::mt19937 rng(99);
  for (const GroupData& g : {heisenberg(), borel(), u4()}) {
    EvalContext ctx(g);
    for (int trial = 0; trial < 20; ++trial) {
      Element a = random_element(g, rng);
      Element b = random_element(g, rng);
      CHECK(ctx.coproduct(a * b) == ctx.coproduct(a) * ctx.coproduct(b));
    }
  }
}

TEST_CASE("monomial order is a total order compatible with products") {
  GroupData g = heisenberg();
  Monomial a = g.zgen(0), b = g.zgen(1), c = g.zgen(2);
  CHECK(a.compare(b) != 0);
  CHECK(a.compare(a) == 0);
  // transitivity spot check and product compatibility
  Monomial ab = a * b, ac = a * c;
  if (b.compare(c) < 0) CHECK(ab.compare(ac) < 0);
  CHECK((a * b) == (b * a));
}
