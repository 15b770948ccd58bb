#include "doctest.h"
#include "tentlab/param.hpp"

#include <random>

using namespace tentlab;

namespace {
Parameter golden() {
  return Parameter::parse("poly:-1,-1,1:interval:1.6,1.7");
}
}  // namespace

TEST_CASE("golden field arithmetic is exact") {
  auto p = golden();
  Real lam = p.lambda();
  // lambda^2 = lambda + 1
  Real diff = lam * lam - lam - p.real(1);
  CHECK(sign_or_throw(diff, p.prec()) == Sign::Zero);
  // division round trips
  Real x = (p.real(3) / lam + p.real(mpq_class(2, 7))) * lam;
  Real back = (x - lam * p.real(mpq_class(2, 7))) / p.real(3);
  CHECK(sign_or_throw(back - p.real(1), p.prec()) == Sign::Zero);
}

TEST_CASE("isolating interval validation") {
  // lambda^2 - 3 lambda + 2 = (l-1)(l-2): two roots in (0, 3)
  CHECK_THROWS_AS(
      Parameter::algebraic(poly_parse("2,-3,1"), mpq_class(0), mpq_class(3)),
      std::invalid_argument);
  // out of range: root of l - 1.3
  CHECK_THROWS_AS(Parameter::parse("dec:1.3"), std::invalid_argument);
  CHECK_THROWS_AS(Parameter::parse("dec:2.0"), std::invalid_argument);
  CHECK_NOTHROW(Parameter::parse("dec:1.9"));
}

TEST_CASE("classify_side examples") {
  auto p = golden();
  auto f_lam = p.lambda();
  // x = b = lambda/2 > 1/2
  Real b = f_lam * p.real(mpq_class(1, 2));
  CHECK(classify_side(b, p) == SideClass::Right);
  // x = 1/2 exactly
  CHECK(classify_side(p.real(mpq_class(1, 2)), p) == SideClass::AtC);
  // golden: a = lambda - lambda^2/2 lies left of c
  Real a = f_lam - f_lam * f_lam / p.real(2);
  CHECK(classify_side(a, p) == SideClass::Left);

  auto pd = Parameter::parse("dec:1.8");
  CHECK(classify_side(pd.real(mpq_class(1, 2)), pd) == SideClass::AtC);
  CHECK(classify_side(pd.real(mpq_class(3, 5)), pd) == SideClass::Right);
}

TEST_CASE("escalate tightens interval enclosures") {
  auto p = Parameter::parse("dec:1.8392867552141611");
  // exact rational: width 0 at any target
  Real q = p.real(mpq_class(1, 3));
  Real e = escalate(q, mpq_class(1, mpz_class(1) << 200), p.prec());
  CHECK(real_width(e, p.prec()) == 0.0);
  // a 40-step orbit expression still escalates to 2^-200
  Real v = p.real(mpq_class(1, 2));
  Real one = p.real(1);
  for (int i = 0; i < 40; ++i) {
    // full tent map formula, alternating branches by value
    v = v.approx() <= 0.5 ? p.lambda() * v : p.lambda() * (one - v);
  }
  mpq_class target(1, mpz_class(1) << 200);
  Real esc = escalate(v, target, p.prec());
  CHECK(width_leq(esc.enclose(4096, 4096), target));
}

TEST_CASE("interval arithmetic is outward rounded") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Real x(Lazy::leaf(mpq_class(static_cast<long>(rng() % 1000) + 1, 997)));
    Real y(Lazy::leaf(mpq_class(static_cast<long>(rng() % 1000) + 1, 991)));
    Real e = x;
    for (int k = 0; k < 30; ++k) {
      switch (rng() % 3) {
        case 0: e = e * y + x; break;
        case 1: e = e - y * x; break;
        case 2: e = e / (y + Real(Lazy::leaf(mpq_class(1)))); break;
      }
    }
    Ival coarse = e.enclose(128);
    Ival fine = e.enclose(1280);
    CHECK(mpfr_cmp(coarse.lo(), fine.lo()) <= 0);
    CHECK(mpfr_cmp(fine.hi(), coarse.hi()) <= 0);
  }
}

TEST_CASE("lambda spec grammar") {
  auto p1 = Parameter::parse("poly:\"-1,-1,1\":interval:\"1.6,1.7\"");
  CHECK(p1.exact());
  auto p2 = Parameter::parse("dec:\"1.8392867552141611\"");
  CHECK(!p2.exact());
  CHECK(mpq_from_decimal("1.25") == mpq_class(5, 4));
  CHECK(mpq_from_decimal("-0.5") == mpq_class(-1, 2));
  CHECK_THROWS(mpq_from_decimal("1.2.3"));
}
