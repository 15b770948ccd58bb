#include "doctest.h"
#include "tentlab/outside.hpp"

using namespace tentlab;

namespace {
TentMap golden_map() {
  return TentMap::make(Parameter::parse("poly:-1,-1,1:interval:1.6,1.7"));
}
bool is_zero(const Real& x, const Parameter& p) {
  return sign_or_throw(x, p.prec()) == Sign::Zero;
}
}  // namespace

TEST_CASE("outside map case analysis") {
  auto f = golden_map();
  // (c, lower) -> b
  CirclePoint img = B_tilde(f, {f.c, Copy::Lower});
  CHECK(is_zero(img.x - f.b, f.p));
  CHECK(img.copy == Copy::Lower);  // b is canonical
  // b -> a
  img = B_tilde(f, {f.b, Copy::Lower});
  CHECK(is_zero(img.x - f.a, f.p));
  CHECK(img.copy == Copy::Lower);
  // a -> f(a) on the lower copy
  img = B_tilde(f, {f.a, Copy::Lower});
  CHECK(is_zero(img.x - tent_eval(f, f.a), f.p));
  CHECK(img.copy == Copy::Lower);
  // plateau: B~ undefined, B constant f(a)_l
  Real mid = (f.a + f.a_hat) / f.p.real(2);
  CHECK_THROWS_AS(B_tilde(f, {mid, Copy::Upper}), DomainError);
  CirclePoint pb = B_outside(f, {mid, Copy::Upper});
  CHECK(is_zero(pb.x - tent_eval(f, f.a), f.p));
  CHECK(pb.copy == Copy::Lower);
  pb = B_outside(f, {f.a_hat, Copy::Upper});
  CHECK(is_zero(pb.x - tent_eval(f, f.a), f.p));
  // B agrees with B~ off gamma
  CirclePoint q = B_outside(f, {f.c, Copy::Lower});
  CHECK(is_zero(q.x - f.b, f.p));
}

TEST_CASE("inverse of the outside map") {
  auto f = golden_map();
  // b -> (c, lower)
  CirclePoint inv = B_tilde_inverse(f, {f.b, Copy::Lower});
  CHECK(is_zero(inv.x - f.c, f.p));
  CHECK(inv.copy == Copy::Lower);
  // f(a)_l -> a (left preimage boundary case)
  Real fa = tent_eval(f, f.a);
  inv = B_tilde_inverse(f, {fa, Copy::Lower});
  CHECK(is_zero(inv.x - f.a, f.p));
  // below f(a) on the lower copy: upper-copy preimage, and a round trip
  auto fd = TentMap::make(Parameter::parse("dec:1.9"));
  CirclePoint y{fd.p.real(mpq_class(12, 100)), Copy::Lower};
  CirclePoint pre = B_tilde_inverse(fd, y);
  CHECK(pre.copy == Copy::Upper);
  CirclePoint back = B_tilde(fd, pre);
  Ival diff = (back.x - y.x).enclose(128);
  CHECK(std::abs(diff.mid_double()) < 1e-40);
  CHECK(back.copy == Copy::Lower);
}

TEST_CASE("extreme elements along the inverse orbit") {
  auto f = golden_map();
  // e(b, 2) = <b, c, x2> with f(x2) = c
  auto e = extreme_element(f, {f.b, Copy::Lower}, 2);
  CHECK(is_zero(e[0] - f.b, f.p));
  CHECK(is_zero(e[1] - f.c, f.p));
  CHECK(is_zero(tent_eval(f, e[2]) - f.c, f.p));
  // golden e(a): period 3 inverse orbit a, b, c, a, ...
  auto ea = extreme_element(f, {f.a, Copy::Lower}, 4);
  CHECK(is_zero(ea[0] - f.a, f.p));
  CHECK(is_zero(ea[1] - f.b, f.p));
  CHECK(is_zero(ea[2] - f.c, f.p));
  CHECK(is_zero(ea[3] - f.a, f.p));
  CHECK(is_zero(ea[4] - f.b, f.p));
  // consecutive coordinates satisfy f(x_{i+1}) = x_i
  auto ee = extreme_element(f, {f.p.real(mpq_class(3, 5)), Copy::Upper}, 10);
  for (int i = 0; i < 10; ++i)
    CHECK(is_zero(tent_eval(f, ee[i + 1]) - ee[i], f.p));
}

TEST_CASE("height of benchmark parameters") {
  // golden: 1/3, lower endpoint, exactly
  auto h = height(golden_map(), 100);
  REQUIRE(h.rational);
  CHECK(h.m == 1);
  CHECK(h.n == 3);
  CHECK(h.type == HeightType::EndpointMinus);
  CHECK(!h.numeric);
  // 1.62: 1/3 interior
  auto h62 = height(TentMap::make(Parameter::parse("dec:1.62")), 100);
  REQUIRE(h62.rational);
  CHECK(h62.m == 1);
  CHECK(h62.n == 3);
  CHECK(h62.type == HeightType::General);
  // tribonacci: 1/4 lower endpoint
  auto ht = height(
      TentMap::make(Parameter::parse("poly:-1,-1,-1,1:interval:1.8,1.9")),
      100);
  REQUIRE(ht.rational);
  CHECK(ht.m == 1);
  CHECK(ht.n == 4);
  CHECK(ht.type == HeightType::EndpointMinus);
  // upper endpoint of the 1/3 interval
  auto hp = height(
      TentMap::make(Parameter::parse("poly:2,-2,-1,-1,1:interval:1.8,1.85")),
      100);
  REQUIRE(hp.rational);
  CHECK(hp.m == 1);
  CHECK(hp.n == 3);
  CHECK(hp.type == HeightType::EndpointPlus);
  // NBT parameter of the 1/3 interval
  auto hn = height(
      TentMap::make(Parameter::parse("poly:1,-1,-1,-1,1:interval:1.7,1.75")),
      100);
  REQUIRE(hn.rational);
  CHECK(hn.m == 1);
  CHECK(hn.n == 3);
  CHECK(hn.type == HeightType::NBT);
  // near 2 the height decays only like 1/log: q(1.99) = 1/7
  auto h99 = height(TentMap::make(Parameter::parse("dec:1.99")), 1000);
  REQUIRE(h99.rational);
  CHECK(h99.m == 1);
  CHECK(h99.n == 7);
  CHECK(h99.bracket_lo <= 1.0 / 7);
  CHECK(h99.bracket_hi >= 1.0 / 7);
}

TEST_CASE("classification cross-checks height against the critical orbit") {
  auto cl = classify(golden_map(), 100);
  CHECK(cl.kind == Classification::Kind::RationalEndpointMinus);
  CHECK(cl.profile.kind == PostcriticalProfile::Kind::PeriodicC);
  CHECK(cl.profile.period == 3);
  auto cln = classify(
      TentMap::make(Parameter::parse("poly:1,-1,-1,-1,1:interval:1.7,1.75")),
      100);
  CHECK(cln.kind == Classification::Kind::RationalNBT);
  CHECK(cln.profile.period == 5);  // n + 2
  auto clp = classify(
      TentMap::make(Parameter::parse("poly:2,-2,-1,-1,1:interval:1.8,1.85")),
      100);
  CHECK(clp.kind == Classification::Kind::RationalEndpointPlus);
  auto cl62 = classify(TentMap::make(Parameter::parse("dec:1.62")), 100);
  CHECK(cl62.kind == Classification::Kind::RationalGeneral);
  CHECK(cl62.profile.kind == PostcriticalProfile::Kind::InfiniteWithinCap);
}

TEST_CASE("rotation bracket pins the height") {
  auto f = golden_map();
  auto [lo, hi] = rotation_bracket(f, 3000);
  CHECK(lo <= 1.0 / 3);
  CHECK(hi >= 1.0 / 3);
  CHECK(hi - lo <= 2.0 / 3000 + 1e-12);
}

TEST_CASE("lift winding accumulates the height numerator") {
  auto f = golden_map();
  LiftPoint y{{f.a, Copy::Lower}, 0};
  for (int i = 0; i < 3; ++i) y = lift_step(f, y);
  // one full turn per period-3 orbit segment, landing back on a
  CHECK(y.winding == 1);
  CHECK(sign_or_throw(y.base.x - f.a, f.p.prec()) == Sign::Zero);
  CHECK(y.base.copy == Copy::Lower);
  // over many steps the average displacement approaches m/n
  LiftPoint z{{f.a, Copy::Lower}, 0};
  const int steps = 300;
  for (int i = 0; i < steps; ++i) z = lift_step(f, z);
  double t_end = circle_coord(f, z.base).approx();
  double rho = (z.winding + t_end) / steps;
  CHECK(std::abs(rho - 1.0 / 3) < 1e-2);
}
