#include "doctest.h"
#include <cmath>
#include "tentlab/ilim.hpp"

using namespace tentlab;

namespace {
TentMap golden_map() {
  return TentMap::make(Parameter::parse("poly:-1,-1,1:interval:1.6,1.7"));
}
bool is_zero(const Real& x, const Parameter& p) {
  return sign_or_throw(x, p.prec()) == Sign::Zero;
}
}  // namespace

TEST_CASE("fhat prepends and its inverse drops") {
  auto f = golden_map();
  Thread t{{f.c}};
  Thread t1 = fhat(f, t);
  REQUIRE(t1.depth() == 1);
  CHECK(is_zero(t1.coords[0] - f.b, f.p));
  CHECK(is_zero(t1.coords[1] - f.c, f.p));
  Thread t2 = fhat(f, t1);
  CHECK(is_zero(t2.coords[0] - f.a, f.p));
  Thread back = fhat_inverse(t2);
  CHECK(back.depth() == 1);
  CHECK(is_zero(back.coords[0] - t1.coords[0], f.p));
  CHECK_THROWS_AS(fhat_inverse(Thread{{f.c}}), DomainError);
  // pi_0(fhat(t)) = f(pi_0(t)) on a deeper random thread
  FiberApprox fb = fiber(f, f.p.real(mpq_class(3, 5)), 10);
  const Thread& rt = fb.threads[fb.threads.size() / 3];
  CHECK(is_zero(fhat(f, rt).coords[0] - tent_eval(f, rt.coords[0]), f.p));
}

TEST_CASE("fiber enumeration matches the branch structure") {
  auto f = golden_map();
  // x = b at depth 1: single thread through c
  FiberApprox fb = fiber(f, f.b, 1);
  REQUIRE(fb.threads.size() == 1);
  CHECK(is_zero(fb.threads[0].coords[1] - f.c, f.p));
  CHECK(!fb.sorted);  // the thread passes through c: itineraries not unique
  // x in (f(a), b) at depth 1: two threads
  Real x = f.p.real(mpq_class(3, 5));
  FiberApprox fb2 = fiber(f, x, 1);
  CHECK(fb2.threads.size() == 2);
  CHECK(fb2.sorted);
  // thread count is bounded by 2^r and words are strictly increasing
  FiberApprox fb3 = fiber(f, x, 10);
  CHECK(fb3.threads.size() <= (1u << 10));
  for (size_t i = 0; i + 1 < fb3.words.size(); ++i)
    CHECK(unimodal_cmp(fb3.words[i], fb3.words[i + 1]) == UniCmp::Less);
}

TEST_CASE("reconstruct inverts enumeration and rejects bad words") {
  auto f = golden_map();
  Real x = f.p.real(mpq_class(3, 5));
  FiberApprox fb = fiber(f, x, 8);
  for (size_t i = 0; i < fb.threads.size(); i += 7) {
    Thread t = reconstruct(f, x, fb.words[i].s);
    for (int k = 0; k <= 8; ++k)
      CHECK(is_zero(t.coords[k] - fb.threads[i].coords[k], f.p));
  }
  // below f(a) the 0 branch does not exist
  auto fd = TentMap::make(Parameter::parse("dec:1.9"));
  CHECK_THROWS_AS(
      reconstruct(fd, fd.p.real(mpq_class(12, 100)), {0, 1, 1}),
      NotRealizable);
}

TEST_CASE("consecutive threads via the upper-extreme tail test") {
  auto fd = TentMap::make(Parameter::parse("dec:1.62"));
  Real x = fd.p.real(mpq_class(61, 100));
  const int r = 14;
  // the two fhat-images of upper extremes of the two preimages are
  // consecutive: tails from level 1 are the upper extremes
  auto pre = tent_preimages(fd, x);
  REQUIRE(pre.size() == 2);
  auto [w0, t0] = extreme_word_upper(fd, pre[0].x, r - 1);
  auto [w1, t1] = extreme_word_upper(fd, pre[1].x, r - 1);
  Thread c0 = fhat(fd, t0);
  Thread c1 = fhat(fd, t1);
  CHECK(consecutive(fd, c0, c1, 4));
  // a thread is not consecutive with itself
  CHECK(!consecutive(fd, c0, c0, 4));
  // mismatched base points are a domain error
  FiberApprox other = fiber(fd, fd.p.real(mpq_class(1, 2)), r);
  CHECK_THROWS_AS(consecutive(fd, c0, other.threads[0], 4), DomainError);
  // adjacent in the sorted fiber is necessary but not sufficient
  FiberApprox fb = fiber(fd, x, 12);
  int adjacent = static_cast<int>(fb.threads.size()) - 1;
  int consec = 0;
  for (int i = 0; i + 1 < static_cast<int>(fb.threads.size()); ++i)
    if (consecutive(fd, fb.threads[i], fb.threads[i + 1], 6)) ++consec;
  CHECK(consec > 0);
  CHECK(consec < adjacent);
}

TEST_CASE("flat arcs") {
  auto fd = TentMap::make(Parameter::parse("dec:1.62"));
  // depth-0 thread spans the whole core interval
  FlatArc all = flat_arc_through(fd, Thread{{fd.p.real(mpq_class(61, 100))}});
  CHECK(is_zero(all.lo - fd.a, fd.p));
  CHECK(is_zero(all.hi - fd.b, fd.p));
  // a thread with a c coordinate is an endpoint, not an arc interior
  Thread bad{{fd.b, fd.c}};
  CHECK_THROWS_AS(flat_arc_through(fd, bad), DomainError);
  // bisection oracle: just beyond each end the word is not realizable with
  // the same side pattern
  FiberApprox fb = fiber(fd, fd.p.real(mpq_class(61, 100)), 10);
  const Thread& t = fb.threads[fb.threads.size() / 2];
  FlatArc arc = flat_arc_through(fd, t);
  Real eps = (arc.hi - arc.lo) / fd.p.real(1000);
  for (int side = 0; side < 2; ++side) {
    Real probe = side == 0 ? arc.lo - eps : arc.hi + eps;
    bool same = true;
    try {
      Thread pt = reconstruct(fd, probe, arc.word);
      same = thread_word(fd, pt).s == arc.word;
    } catch (const NotRealizable&) {
      same = false;
    } catch (const DomainError&) {
      same = false;
    }
    CHECK(!same);
  }
}

TEST_CASE("zero boxes over admissible intervals") {
  auto fd = TentMap::make(Parameter::parse("dec:1.62"));
  Real lo = fd.p.real(mpq_class(55, 100));
  Real hi = fd.p.real(mpq_class(56, 100));
  // dense critical orbits do not admit wide intervals against a deep
  // postcritical cap: the depth-10 box checks the first 64 orbit points
  ZeroBox box = zero_box(fd, lo, hi, 10, 64);
  // arc count equals the fiber count of the midpoint
  Real mid = (lo + hi) / fd.p.real(2);
  FiberApprox fb = fiber(fd, mid, 10);
  CHECK(box.words.size() == fb.threads.size());
  // every box word reconstructs over both endpoints
  for (const auto& w : box.words) {
    CHECK_NOTHROW(reconstruct(fd, lo, w));
    CHECK_NOTHROW(reconstruct(fd, hi, w));
  }
  // K containing f(a) is rejected
  Real fa = tent_eval(fd, fd.a);
  Real d = fd.p.real(mpq_class(1, 100));
  CHECK_THROWS_AS(zero_box(fd, fa - d, fa + d, 4), NotInY);
}

TEST_CASE("cylinder metric bound") {
  auto fd = TentMap::make(Parameter::parse("dec:1.62"));
  FiberApprox fb = fiber(fd, fd.p.real(mpq_class(61, 100)), 8);
  // two extensions of the same depth-8 cylinder stay within 1/2^8
  Thread u = fb.threads[0], v = fb.threads[0];
  for (int k = 0; k < 10; ++k) {
    auto pu = tent_preimages(fd, u.coords.back());
    auto pv = tent_preimages(fd, v.coords.back());
    u.coords.push_back(pu.front().x);
    v.coords.push_back(pv.back().x);
  }
  CHECK(thread_distance(u, v) <= std::ldexp(1.0, -8));
}
