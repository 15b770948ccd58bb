#include "doctest.h"
#include <cstdio>
#include "tentlab/tent.hpp"

using namespace tentlab;

namespace {
TentMap golden_map() {
  return TentMap::make(Parameter::parse("poly:-1,-1,1:interval:1.6,1.7"));
}
}  // namespace

TEST_CASE("tent eval identities") {
  auto f = golden_map();
  const auto& pp = f.p.prec();
  // f(c) = b and f(b) = a
  CHECK(sign_or_throw(tent_eval(f, f.c) - f.b, pp) == Sign::Zero);
  CHECK(sign_or_throw(tent_eval(f, f.b) - f.a, pp) == Sign::Zero);
  // golden: f(a) = c exactly
  CHECK(sign_or_throw(tent_eval(f, f.a) - f.c, pp) == Sign::Zero);
  // domain error outside the core by a provable margin
  CHECK_THROWS_AS(tent_eval(f, f.p.real(mpq_class(1, 100))), DomainError);
}

TEST_CASE("hat is the mirror involution") {
  auto f = golden_map();
  const auto& pp = f.p.prec();
  CHECK(sign_or_throw(tent_hat(f, f.a) - f.a_hat, pp) == Sign::Zero);
  CHECK(sign_or_throw(tent_hat(f, f.a_hat) - f.a, pp) == Sign::Zero);
  Real x = f.p.real(mpq_class(45, 100));
  CHECK(sign_or_throw(tent_eval(f, tent_hat(f, x)) - tent_eval(f, x), pp) ==
        Sign::Zero);
  CHECK_THROWS_AS(tent_hat(f, f.c), DomainError);
  CHECK_THROWS_AS(tent_hat(f, f.b), DomainError);
}

TEST_CASE("preimages per branch availability") {
  auto f = golden_map();
  const auto& pp = f.p.prec();
  // y = b: only c
  auto pre_b = tent_preimages(f, f.b);
  REQUIRE(pre_b.size() == 1);
  CHECK(sign_or_throw(pre_b[0].x - f.c, pp) == Sign::Zero);
  // y = f(a): both a and a_hat
  Real fa = tent_eval(f, f.a);
  auto pre_fa = tent_preimages(f, fa);
  REQUIRE(pre_fa.size() == 2);
  CHECK(sign_or_throw(pre_fa[0].x - f.a, pp) == Sign::Zero);
  CHECK(sign_or_throw(pre_fa[1].x - f.a_hat, pp) == Sign::Zero);
  CHECK(pre_fa[0].branch == 0);
  CHECK(pre_fa[1].branch == 1);
  // below f(a): single branch-1 preimage (decimal parameter, f(a) > a)
  auto pd = Parameter::parse("dec:1.9");
  auto fd = TentMap::make(pd);
  Real y = pd.real(mpq_class(12, 100));  // a ~ 0.095, f(a) ~ 0.1805
  auto pre = tent_preimages(fd, y);
  REQUIRE(pre.size() == 1);
  CHECK(pre[0].branch == 1);
  // eval of every preimage returns y
  for (const auto& pr : tent_preimages(fd, pd.real(mpq_class(1, 2)))) {
    Ival diff = (tent_eval(fd, pr.x) - pd.real(mpq_class(1, 2))).enclose(128);
    CHECK(std::abs(diff.mid_double()) < 1e-30);
  }
}

TEST_CASE("itineraries and the kneading word") {
  auto f = golden_map();
  // fixed point: all ones
  Word wp = itinerary(f, f.p_fix, 16);
  CHECK(wp.str() == "1111111111111111");
  // golden kneading: epsilon = 1 and word (101)^infty
  CHECK(*tent_epsilon(f) == 1);
  CHECK(kneading(f, 12).str() == "101101101101");
  // non-periodic c hit: common prefix with ambiguity flag
  auto pd = Parameter::parse("dec:1.7");
  auto fd = TentMap::make(pd);
  Word wamb = itinerary(fd, fd.c, 10);
  CHECK(wamb.ambiguous_tail);
  CHECK(wamb.size() == 0);
  auto both = itinerary_both(fd, fd.c, 10);
  CHECK(both.first.size() == 10);
  CHECK(both.second.size() == 10);
  CHECK(both.first.s[0] == 0);
  CHECK(both.second.s[0] == 1);
  // tails agree after the hit
  for (int i = 1; i < 10; ++i) CHECK(both.first.s[i] == both.second.s[i]);
}

TEST_CASE("unimodal order") {
  Word s, t;
  s.s = {1, 0, 1};
  t.s = {1, 1, 0};
  CHECK(unimodal_cmp(s, t) == UniCmp::Greater);
  s.s = {0, 0};
  t.s = {0, 1};
  CHECK(unimodal_cmp(s, t) == UniCmp::Less);
  s.s = {1, 0};
  t.s = {1, 0};
  CHECK(unimodal_cmp(s, t) == UniCmp::EqualAtDepth);
  t.s = {1, 0, 1};
  CHECK(unimodal_cmp(s, t) == UniCmp::EqualAtDepth);
}

TEST_CASE("postcritical profiles") {
  // golden: period 3 exactly
  auto prof = postcritical_profile(golden_map(), 64);
  CHECK(prof.kind == PostcriticalProfile::Kind::PeriodicC);
  CHECK(prof.period == 3);
  CHECK(!prof.numeric);
  // decimal 1.9: no coincidence within 200 steps
  auto fd = TentMap::make(Parameter::parse("dec:1.9"));
  auto profd = postcritical_profile(fd, 200);
  CHECK(profd.kind == PostcriticalProfile::Kind::InfiniteWithinCap);
  // preperiodic parameter: root of l^4 - l^3 - l^2 - 2l + 2 near 1.8213
  auto pp = Parameter::parse("poly:2,-2,-1,-1,1:interval:1.8,1.85");
  auto fp = TentMap::make(pp);
  auto profp = postcritical_profile(fp, 64);
  CHECK(profp.kind == PostcriticalProfile::Kind::PreperiodicC);
  CHECK(profp.period == 3);
  CHECK(profp.preperiod == 3);
  // NBT parameter: root of l^4 - l^3 - l^2 - l + 1 near 1.7215, period 5
  auto pn = Parameter::parse("poly:1,-1,-1,-1,1:interval:1.7,1.75");
  auto fn = TentMap::make(pn);
  auto profn = postcritical_profile(fn, 64);
  CHECK(profn.kind == PostcriticalProfile::Kind::PeriodicC);
  CHECK(profn.period == 5);
  // tribonacci: period 4
  auto pt = Parameter::parse("poly:-1,-1,-1,1:interval:1.8,1.9");
  auto proft = postcritical_profile(TentMap::make(pt), 64);
  CHECK(proft.kind == PostcriticalProfile::Kind::PeriodicC);
  CHECK(proft.period == 4);
}

TEST_CASE("f(a) < p < a_hat across 100 sampled slopes") {
  for (int i = 0; i < 100; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", 1.4143 + (2.0 - 1.4144) * i / 100.0);
    auto p = Parameter::parse(std::string("dec:") + buf);
    auto f = TentMap::make(p);
    Real fa = tent_eval(f, f.a);
    CHECK(sign_or_throw(f.p_fix - fa, p.prec()) == Sign::Positive);
    CHECK(sign_or_throw(f.a_hat - f.p_fix, p.prec()) == Sign::Positive);
  }
}

TEST_CASE("kneading starts 10(11)^k 0 across the family") {
  for (const char* spec :
       {"dec:1.45", "dec:1.62", "dec:1.75", "dec:1.9", "dec:1.99"}) {
    auto f = TentMap::make(Parameter::parse(spec));
    Word k = kneading(f, 24);
    REQUIRE(k.size() >= 3);
    CHECK(k.s[0] == 1);
    CHECK(k.s[1] == 0);
    size_t i = 2;
    while (i + 1 < k.size() && k.s[i] == 1 && k.s[i + 1] == 1) i += 2;
    REQUIRE(i < k.size());
    CHECK(k.s[i] == 0);
  }
}
