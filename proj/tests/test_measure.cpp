#include "doctest.h"
#include "tentlab/measure.hpp"

#include <random>

using namespace tentlab;

namespace {
TentMap golden_map() {
  return TentMap::make(Parameter::parse("poly:-1,-1,1:interval:1.6,1.7"));
}
bool is_zero(const Real& x, const Parameter& p) {
  return sign_or_throw(x, p.prec()) == Sign::Zero;
}
}  // namespace

TEST_CASE("Markov density at golden is the exact two-piece step function") {
  auto f = golden_map();
  Density d = density_markov(f);
  // phi = k1 on [a, c), k2 on [c, b] with k2 = lambda k1, total mass 1
  Real k1 = d.eval(f.p.real(mpq_class(2, 5)));
  Real k2 = d.eval(f.p.real(mpq_class(3, 5)));
  CHECK(is_zero(k2 - f.lambda * k1, f.p));
  CHECK(is_zero(k1 * (f.c - f.a) + k2 * (f.b - f.c) - f.p.real(1), f.p));
  // transfer identity exactly at interior rational points
  for (long num : {41, 47, 55, 61, 72}) {
    Real x = f.p.real(mpq_class(num, 100));
    Real rhs = f.p.real(0);
    for (const auto& pre : tent_preimages(f, x))
      rhs = rhs + d.eval(pre.x) / f.lambda;
    CHECK(is_zero(d.eval(x) - rhs, f.p));
  }
  // normalization integral is exactly 1
  CHECK(is_zero(d.integral(f.a, f.b) - f.p.real(1), f.p));
  // non-Markov parameter refuses
  CHECK_THROWS_AS(density_markov(TentMap::make(Parameter::parse("dec:1.62"))),
                  NotMarkov);
}

TEST_CASE("step-series density solves the transfer equation pointwise") {
  auto fd = TentMap::make(Parameter::parse("dec:1.62"));
  Density d = density_series(fd);
  CHECK(d.floor_value() > 0);
  std::mt19937_64 rng(5);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    double x = fd.a.approx() +
               (fd.b.approx() - fd.a.approx()) * ((rng() >> 11) * 0x1p-53);
    double lam = fd.lambda.approx();
    double rhs = d.eval_d(1 - x / lam) / lam;
    if (x >= lam * fd.a.approx()) rhs += d.eval_d(x / lam) / lam;
    worst = std::max(worst, std::abs(d.eval_d(x) - rhs));
  }
  CHECK(worst <= 1e-10);
  // total mass 1
  CHECK(std::abs(d.integral_d(0.0, 1.0) - 1.0) < 1e-12);
}

TEST_CASE("grid density converges with a small fixed-point residual") {
  auto fd = TentMap::make(Parameter::parse("dec:1.9"));
  // an unreachable tolerance within one iteration refuses loudly
  CHECK_THROWS_AS(density_grid(fd, 64, 1e-30, 1), NotConverged);
  Density g = density_grid(fd, 1 << 12, 1e-10, 4000);
  CHECK(g.residual() <= 1e-8);
  CHECK(g.floor_value() > 0);
  // agrees with the exact series in L1
  Density s = density_series(fd);
  double A = fd.a.approx(), B = fd.b.approx();
  int N = 1 << 12;
  double W = (B - A) / N, l1 = 0;
  for (int i = 0; i < N; ++i) {
    double m = A + W * (i + 0.5);
    l1 += std::abs(g.eval_d(m) - s.eval_d(m)) * W;
  }
  CHECK(l1 <= 0.02);
}

TEST_CASE("alpha masses of cylinders") {
  auto f = golden_map();
  Density d = density_markov(f);
  Real x = f.p.real(mpq_class(3, 5));
  // depth 0: whole fiber mass is phi(x)
  Thread t0{{x}};
  CHECK(is_zero(alpha_cylinder(d, t0).value - d.eval(x), f.p));
  // children sum to the parent
  auto pre = tent_preimages(f, x);
  Real child_sum = f.p.real(0);
  for (const auto& pr : pre) {
    Thread child{{x, pr.x}};
    child_sum = child_sum + alpha_cylinder(d, child).value;
  }
  CHECK(is_zero(child_sum - alpha_cylinder(d, t0).value, f.p));
  // fhat contracts by exactly 1/lambda
  Thread deep{{x, pre[0].x}};
  Real lhs = alpha_cylinder(d, fhat(f, deep)).value * f.lambda;
  CHECK(is_zero(lhs - alpha_cylinder(d, deep).value, f.p));
}

TEST_CASE("box masses are base-point independent") {
  auto f = golden_map();
  Density d = density_markov(f);
  Real lo = f.p.real(mpq_class(55, 100));
  Real hi = f.p.real(mpq_class(57, 100));
  ZeroBox box = zero_box(f, lo, hi, 8);
  Real x = f.p.real(mpq_class(551, 1000));
  Real y = f.p.real(mpq_class(569, 1000));
  CHECK(is_zero(alpha_of_box(d, box, x) - alpha_of_box(d, box, y), f.p));
  // the full box over K carries the whole fiber: mass phi(x)
  CHECK(is_zero(alpha_of_box(d, box, x) - d.eval(x), f.p));
}

TEST_CASE("disintegration of cylinder families") {
  auto f = golden_map();
  Density d = density_markov(f);
  // J = I at r = 0: total mass both sides
  auto rI = disintegration_check(d, 0, f.a.approx(), f.b.approx(), 1 << 12);
  CHECK(std::abs(rI.lhs - 1.0) < 2e-3);
  CHECK(std::abs(rI.rhs - 1.0) < 1e-12);
  // J = [a, c] at r = 3
  auto r3 = disintegration_check(d, 3, f.a.approx(), 0.5, 1 << 12);
  CHECK(r3.gap < 1e-3);
}

TEST_CASE("Markov density matches a long Birkhoff histogram at golden") {
  auto f = golden_map();
  Density d = density_markov(f);
  double A = f.a.approx(), B = f.b.approx();
  const int bins = 1 << 9;
  const double W = (B - A) / bins;
  std::vector<double> hist(bins, 0.0);
  const double lam = f.lambda.approx();
  double x = 0.5424243919;
  for (int i = 0; i < 1000; ++i) x = x <= 0.5 ? lam * x : lam * (1 - x);
  const long steps = 10000000;
  for (long i = 0; i < steps; ++i) {
    x = x <= 0.5 ? lam * x : lam * (1 - x);
    int b = static_cast<int>((x - A) / W);
    if (b >= 0 && b < bins) hist[b] += 1.0;
  }
  double l1 = 0;
  for (int b = 0; b < bins; ++b) {
    double emp = hist[b] / (steps * W);
    double blo = A + W * b;
    double model = d.integral_d(blo, blo + W) / W;
    l1 += std::abs(emp - model) * W;
  }
  CHECK(l1 < 0.01);
}

TEST_CASE("grid agrees with the exact Markov density at five parameters") {
  const char* specs[5] = {
      "poly:-1,-1,1:interval:1.6,1.7",        // period 3
      "poly:-1,-1,-1,1:interval:1.8,1.9",     // period 4
      "poly:2,-2,-1,-1,1:interval:1.8,1.85",  // preperiodic
      "poly:1,-1,-1,-1,1:interval:1.7,1.75",  // period 5
      "poly:1,-2,1,-2,1:interval:1.85,1.95",  // period 6
  };
  for (const char* spec : specs) {
    auto f = TentMap::make(Parameter::parse(spec));
    Density markov = density_markov(f);
    Density grid = density_grid(f, 1 << 12, 1e-10, 4000);
    double A = f.a.approx(), B = f.b.approx();
    int N = 1 << 12;
    double W = (B - A) / N, l1 = 0;
    for (int i = 0; i < N; ++i) {
      double m = A + W * (i + 0.5);
      l1 += std::abs(grid.eval_d(m) - markov.eval_d(m)) * W;
    }
    INFO(spec, " L1 = ", l1);
    CHECK(l1 <= 0.02);
  }
}

TEST_CASE("unstable measure is base length") {
  auto fd = TentMap::make(Parameter::parse("dec:1.62"));
  FiberApprox fb = fiber(fd, fd.p.real(mpq_class(61, 100)), 8);
  FlatArc arc = flat_arc_through(fd, fb.threads[1]);
  CHECK(is_zero(unstable_measure(fd, arc, arc.lo, arc.hi) - (arc.hi - arc.lo),
                fd.p));
  // empty subinterval has zero measure
  CHECK(is_zero(unstable_measure(fd, arc, arc.lo, arc.lo), fd.p));
  // leaving the base is a domain error
  Real eps = fd.p.real(mpq_class(1, 1000));
  CHECK_THROWS_AS(unstable_measure(fd, arc, arc.lo - eps, arc.hi),
                  DomainError);
}
