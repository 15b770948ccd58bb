#include "doctest.h"
#include "tentlab/glue.hpp"
#include <cmath>

using namespace tentlab;

namespace {
TentMap golden_map() {
  return TentMap::make(Parameter::parse("poly:-1,-1,1:interval:1.6,1.7"));
}
}  // namespace

TEST_CASE("H embedding values") {
  // all-zero word: eps stays 0, left end of the Cantor set
  auto [z_lo, z_hi] = H_embed({0, 0, 0, 0});
  CHECK(z_lo == 0);
  CHECK(z_hi == mpq_class(1, 81));
  // word 1 0 0 0: parity stays odd, approaches 1
  auto [o_lo, o_hi] = H_embed({1, 0, 0, 0});
  CHECK(o_lo == mpq_class(80, 81));
  CHECK(o_hi == 1);
  // single symbols split at the middle third
  auto [a_lo, a_hi] = H_embed({0});
  auto [b_lo, b_hi] = H_embed({1});
  CHECK(a_lo == 0);
  CHECK(a_hi == mpq_class(1, 3));
  CHECK(b_lo == mpq_class(2, 3));
  CHECK(b_hi == 1);
}

TEST_CASE("fiber arcs collapse to measure coordinates") {
  auto f = golden_map();
  Density d = density_markov(f);
  Real x = f.p.real(mpq_class(61, 100));
  FiberArc arc = fiber_arc(f, d, x, 12, 6);
  // cum is increasing and totals phi(x) exactly
  const auto& pp = f.p.prec();
  CHECK(sign_or_throw(arc.cum.back() - d.eval(x), pp) == Sign::Zero);
  for (size_t i = 0; i + 1 < arc.cum.size(); ++i)
    CHECK(sign_or_throw(arc.cum[i + 1] - arc.cum[i], pp) == Sign::Positive);
  // identified pairs never involve the extremes, and H intervals are ordered
  double phi_max = 0;
  {
    double A = f.a.approx(), B = f.b.approx();
    for (int k = 0; k < 64; ++k)
      phi_max = std::max(phi_max, d.eval_d(A + (B - A) * (k + 0.5) / 64));
  }
  const int guard = 6;
  double junction_bound =
      phi_max / std::pow(f.lambda.approx(), arc.r - guard);
  for (auto [i, j] : arc.identified) {
    CHECK(i > 0);
    CHECK(j < static_cast<int>(arc.threads.size()) - 1);
    // the collapsed junction carries vanishing mass on both sides
    CHECK((arc.cum[i + 1] - arc.cum[i]).approx() <= junction_bound);
    CHECK((arc.cum[j + 1] - arc.cum[j]).approx() <= junction_bound);
  }
  for (size_t i = 0; i + 1 < arc.h_lo.size(); ++i)
    CHECK(arc.h_hi[i] <= arc.h_lo[i + 1]);
  // postcritical base points are rejected
  CHECK_THROWS_AS(fiber_arc(f, d, f.a, 8), InGrandOrbit);
}

TEST_CASE("identification classes at a rational general parameter") {
  auto fd = TentMap::make(Parameter::parse("dec:1.62"));
  Density d = density_series(fd);
  Classification cl = classify(fd, 200);
  REQUIRE(cl.kind == Classification::Kind::RationalGeneral);
  // EI pair for an upper extreme over x in (a, c)
  Real x = fd.p.real(mpq_class(2, 5));
  IdentClass ei = identify_partner(fd, cl, {x, Copy::Upper}, 0, 12);
  CHECK(ei.kind == IdentClass::Kind::EI);
  REQUIRE(ei.members.size() == 2);
  // the partners project to x and 1-x
  Ival d0 = (ei.members[0].coords[0] - x).enclose(128);
  Ival d1 =
      (ei.members[1].coords[0] - (fd.p.real(1) - x)).enclose(128);
  CHECK(std::abs(d0.mid_double()) < 1e-40);
  CHECK(std::abs(d1.mid_double()) < 1e-40);
  // EII triple at z_hat_u where z = f^n(a)
  Real z = fd.a;
  for (long i = 0; i < cl.h.n; ++i) z = tent_eval(fd, z);
  Real z_hat = fd.p.real(1) - z;
  IdentClass eii = identify_partner(fd, cl, {z_hat, Copy::Upper}, 0, 12);
  CHECK(eii.kind == IdentClass::Kind::EII);
  CHECK(eii.members.size() == 3);
  // EIII at the attracting period-3 orbit: p1 = lambda/(l^2 + l + 1)
  Real denom = fd.lambda * fd.lambda + fd.lambda + fd.p.real(1);
  Real p1 = fd.lambda / denom;
  IdentClass eiii = identify_partner(fd, cl, {p1, Copy::Lower}, 0, 12);
  CHECK(eiii.kind == IdentClass::Kind::EIII);
  CHECK(eiii.members.size() == 3);
  // three-element classes do not exist at endpoint type: golden's a_hat_u
  // entry point asks for one and is refused
  auto fg = golden_map();
  Classification clg = classify(fg, 100);
  CHECK_THROWS_AS(
      identify_partner(fg, clg, {fg.a_hat, Copy::Upper}, 0, 12),
      TypeMismatch);
}

TEST_CASE("chart patches have psi constant on arcs and totaling phi") {
  auto f = golden_map();
  Density d = density_markov(f);
  Real lo = f.p.real(mpq_class(55, 100));
  Real hi = f.p.real(mpq_class(57, 100));
  ChartPatch patch = chart_patch(f, d, lo, hi, 8, 7);
  REQUIRE(!patch.words.empty());
  for (const auto& row : patch.psi) {
    double mn = row[0], mx = row[0];
    for (double v : row) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    CHECK(mx - mn <= 1e-12);
  }
  // the top arc accumulates the whole fiber mass phi(x)
  for (size_t i = 0; i < patch.xs.size(); ++i) {
    double phi = d.eval_d(patch.xs[i]);
    CHECK(std::abs(patch.psi.back()[i] - phi) <= 1e-9);
  }
  // K through a postcritical point is rejected
  Real fa = tent_eval(f, f.a);
  Real dd = f.p.real(mpq_class(1, 200));
  CHECK_THROWS_AS(chart_patch(f, d, fa - dd, fa + dd, 6, 3), NotInY);
}

TEST_CASE("streamline arcs join at shared endpoint threads") {
  auto fd = TentMap::make(Parameter::parse("dec:1.62"));
  Real x = fd.p.real(mpq_class(61, 100));
  FiberApprox fb = fiber(fd, x, 10);
  Streamline line = trace_streamline(fd, fb.threads[fb.threads.size() / 2], 6);
  CHECK(line.arcs.size() >= 3);
  for (size_t i = 0; i + 1 < line.arcs.size(); ++i) {
    // some endpoint pair coincides, and the shared endpoint thread has a
    // c coordinate at the binding level
    double best = 1e9;
    for (const Real* u : {&line.arcs[i].lo, &line.arcs[i].hi})
      for (const Real* v : {&line.arcs[i + 1].lo, &line.arcs[i + 1].hi})
        best = std::min(best, std::abs(u->approx() - v->approx()));
    CHECK(best < 1e-30);
  }
  for (const auto& arc : line.arcs) {
    if (arc.bind_hi > 0 && arc.bind_hi_at_c) {
      Ival cc =
          (arc.hi_thread.coords[arc.bind_hi] - fd.c).enclose(128);
      CHECK(std::abs(cc.mid_double()) < 1e-30);
    }
  }
}

TEST_CASE("cantor approximation of the gamma-avoiding orbit") {
  // golden: the orbit lands exactly on the plateau boundary at step 3
  auto ca = cantor_approx(golden_map(), 100);
  CHECK(ca.entered_gamma);
  CHECK(ca.entered_step == 3);
  // a short decimal near golden decides quickly: the return time grows only
  // like the log of the distance to the plateau boundary
  auto fd15 = TentMap::make(Parameter::parse("dec:1.61803398874989"));
  auto cb15 = cantor_approx(fd15, 2000);
  CHECK(cb15.entered_gamma);
  CHECK(cb15.entered_step > 30);
  // Fibonacci convergents from below: entry time ~ twice the index
  auto fib_param = [](int loop_to) {
    mpz_class f0 = 1, f1 = 1;
    for (int i = 2; i <= loop_to; ++i) {
      mpz_class f2 = f0 + f1;
      f0 = f1;
      f1 = f2;
    }
    PrecPolicy deep;
    deep.def = 2048;
    deep.cap = 8192;
    return Parameter::decimal_mpq(mpq_class(f1, f0), deep);
  };
  {
    auto fd = TentMap::make(fib_param(599));
    auto cb = cantor_approx(fd, 2000);
    CHECK(cb.entered_gamma);
    CHECK(cb.entered_step > 1000);  // ~ 2 * 599
    CHECK(cb.min_dist_to_a < 1e-40);
  }
  {
    // an index deep enough that the horizon ends before any entry
    auto fd = TentMap::make(fib_param(1101));
    auto cb = cantor_approx(fd, 2000);
    CHECK(!cb.entered_gamma);
    CHECK(cb.points.size() == 2000);
    CHECK(cb.min_dist_to_a < 1e-40);
    // gaps are sorted by size and the largest contains the plateau
    REQUIRE(!cb.gaps.empty());
    double g0 = cb.gaps[0].second - cb.gaps[0].first;
    double t_ahat = circle_coord(fd, {fd.a_hat, Copy::Upper}).approx();
    CHECK(g0 >= 1.0 - t_ahat - 1e-9);
  }
}

TEST_CASE("spike measure is half the base length") {
  auto fd = TentMap::make(Parameter::parse("dec:1.62"));
  FiberApprox fb = fiber(fd, fd.p.real(mpq_class(61, 100)), 8);
  FlatArc arc = flat_arc_through(fd, fb.threads[2]);
  Real full = spike_aware_measure(fd, arc, arc.lo, arc.hi, false);
  Real half = spike_aware_measure(fd, arc, arc.lo, arc.hi, true);
  CHECK(sign_or_throw(full - half * fd.p.real(2), fd.p.prec()) == Sign::Zero);
  // the folded extreme arc over (a, a_hat): half its base length equals the
  // one-sided length c - a
  Real lhs = (fd.a_hat - fd.a) / fd.p.real(2);
  CHECK(sign_or_throw(lhs - (fd.c - fd.a), fd.p.prec()) == Sign::Zero);
}
