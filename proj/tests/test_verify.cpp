#include "doctest.h"
#include "tentlab/verify.hpp"

using namespace tentlab;

namespace {
TentMap golden_map() {
  return TentMap::make(Parameter::parse("poly:-1,-1,1:interval:1.6,1.7"));
}
}  // namespace

TEST_CASE("tartan construction is total and oriented") {
  auto f = golden_map();
  Density d = density_markov(f);
  Real lo = f.p.real(mpq_class(55, 100));
  Real hi = f.p.real(mpq_class(57, 100));
  TartanApprox t = build_tartan(f, d, lo, hi, 10, 4);
  CHECK(t.stable_xs.size() == 4);
  CHECK(!t.box.words.size() == 0);
  // intersection matrix is total: every word reconstructs over every x
  for (const auto& x : t.stable_xs)
    for (const auto& w : t.box.words) CHECK_NOTHROW(reconstruct(f, x, w));
  // orientation: stable base points increasing, words in unimodal order
  const auto& pp = f.p.prec();
  for (size_t i = 0; i + 1 < t.stable_xs.size(); ++i)
    CHECK(cmp_or_throw(t.stable_xs[i], t.stable_xs[i + 1], pp) < 0);
  for (size_t i = 0; i + 1 < t.box.words.size(); ++i)
    CHECK(unimodal_cmp(t.box.words[i], t.box.words[i + 1]) == UniCmp::Less);
}

TEST_CASE("tartan compatibility and scaling at golden") {
  auto f = golden_map();
  Density d = density_markov(f);
  Real lo = f.p.real(mpq_class(55, 100));
  Real hi = f.p.real(mpq_class(57, 100));
  TartanApprox t = build_tartan(f, d, lo, hi, 10, 6);
  Report compat = check_compatibility(f, d, t, 1e-6, 7);
  CHECK(compat.status == Report::Status::Pass);
  Report scal = check_scaling(f, d, t);
  CHECK(scal.status == Report::Status::Pass);
  Report tame = check_tameness(f, d, 25, 10, 7);
  CHECK(tame.status == Report::Status::Pass);
  Report reg = check_regularity(f, d, t);
  CHECK(reg.status == Report::Status::Pass);
}

TEST_CASE("suite registry") {
  CHECK_THROWS_AS(
      run_suite({"no_such_suite"}, golden_map().p, 7, 12),
      UnknownSuite);
  auto reports = run_suite({"model_action", "h_embed_order", "order_fa_p_ha"},
                           Parameter::parse("poly:-1,-1,1:interval:1.6,1.7"),
                           7, 12);
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.status == Report::Status::Pass);
  }
  // suite list is nonempty and stable
  CHECK(suite_names().size() >= 25);
}

TEST_CASE("irrational-case suites at a deep Fibonacci convergent") {
  // F_5502/F_5501 is ~phi^-11000 below golden: the height stays undecided
  // for 10^4 iterations, which activates the gamma-avoidance suites
  mpz_class f0 = 1, f1 = 1;
  for (int i = 2; i <= 5501; ++i) {
    mpz_class f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
  }
  PrecPolicy deep;
  deep.def = 8192;
  deep.cap = 16384;
  auto p = Parameter::decimal_mpq(mpq_class(f1, f0), deep);
  auto reports = run_suite({"gamma_avoidance", "irrat_key_d"}, p, 7, 12);
  REQUIRE(reports.size() == 2);
  for (const auto& r : reports) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.status == Report::Status::Pass);
  }
}
