#include "tentlab/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <map>
#include <sstream>

namespace tentlab {

mpq_class rand_unit(std::mt19937_64& rng) {
  mpz_class num(static_cast<unsigned long>(rng() >> 16));
  mpq_class q(num, mpz_class(1) << 48);
  q.canonicalize();
  return q;
}

Real rand_point(const TentMap& f, std::mt19937_64& rng, int margin) {
  // uniform in [a + m(b-a)/2^16, b - m(b-a)/2^16]
  mpq_class u = rand_unit(rng);
  mpq_class m(margin, 1 << 16);
  u = m + u * (1 - 2 * m);
  return f.a + (f.b - f.a) * f.p.real(u);
}

namespace {

struct SuiteCtx {
  Parameter p;
  TentMap f;
  unsigned long seed;
  int depth;
};

using SuiteFn = std::function<void(const SuiteCtx&, Report&)>;

Density pick_density(const TentMap& f) {
  if (f.p.exact()) {
    try {
      return density_markov(f);
    } catch (const NotMarkov&) {
      return density_series(f);
    }
  }
  return density_series(f);
}

double abs_hi(const Real& x) {
  Ival v = x.enclose(192);
  return std::max(std::abs(v.lo_double()), std::abs(v.hi_double()));
}

bool provably_zero(const Real& x, const Parameter& p) {
  auto s = try_sign(x, p.prec());
  return s && *s == Sign::Zero;
}

// Depth-adapted cap on the capped Y-check. Interval parameters with dense
// critical orbits admit no interval that avoids hundreds of postcritical
// points, but the depth-r construction only consults the first few.
int y_cap_for_depth(int r) { return std::max(64, 4 * r); }

// Interval K = [center - w, center + w] passing the zero-box Y-check.
std::pair<Real, Real> find_admissible_k(const TentMap& f, std::mt19937_64& rng,
                                        int r, int denom = 256) {
  const int cap = y_cap_for_depth(r);
  for (int attempt = 0; attempt < 128; ++attempt) {
    mpq_class u = rand_unit(rng);
    u = mpq_class(1, 8) + u * mpq_class(3, 4);
    Real center = f.a + (f.b - f.a) * f.p.real(u);
    Real w = (f.b - f.a) / f.p.real(denom);
    Real lo = center - w, hi = center + w;
    try {
      zero_box(f, lo, hi, std::min(r, 2), cap);
      return {lo, hi};
    } catch (const NotInY&) {
      continue;
    }
  }
  throw NotInY("no admissible interval found for the zero-box tests");
}

void set_gap(Report& rep, double gap, double tol) {
  rep.gap = std::max(rep.gap, gap);
  rep.tol = tol;
  if (rep.status != Report::Status::Fail)
    rep.status = gap <= tol ? Report::Status::Pass : Report::Status::Fail;
}

// ------------------------------ arith suites -------------------------------

void suite_interval_outward(const SuiteCtx& ctx, Report& rep) {
  // random rational expression chains evaluated at 256 and 2560 bits: the
  // tighter enclosure must be contained in the looser one
  std::mt19937_64 rng(ctx.seed ^ 0xa001);
  rep.tol = 0;
  for (int i = 0; i < 200; ++i) {
    Real x(Lazy::leaf(rand_unit(rng)));
    Real y(Lazy::leaf(rand_unit(rng) + 1));
    Real e = x;
    for (int k = 0; k < 25; ++k) {
      switch (rng() % 4) {
        case 0: e = e + y; break;
        case 1: e = e - y; break;
        case 2: e = e * y; break;
        case 3: e = e / y; break;
      }
      // mix in x so the DAG is not a pure chain
      if (rng() % 3 == 0) e = e * x;
    }
    Ival coarse = e.enclose(256);
    Ival fine = e.enclose(2560);
    bool contained = mpfr_cmp(coarse.lo(), fine.lo()) <= 0 &&
                     mpfr_cmp(fine.hi(), coarse.hi()) <= 0;
    if (!contained) {
      rep.status = Report::Status::Fail;
      rep.detail = "refined enclosure escaped the coarse one";
      return;
    }
  }
  rep.status = Report::Status::Pass;
}

void suite_exact_matches_interval(const SuiteCtx& ctx, Report& rep) {
  if (!ctx.p.exact()) {
    rep.status = Report::Status::Undecided;
    rep.detail = "requires the algebraic backend";
    return;
  }
  // orbit of c in Q(lambda) vs an independent 512-bit interval orbit
  Real v = ctx.f.c;
  Ival lam = ctx.p.lambda().enclose(512);
  Ival w = Ival::from_mpq(mpq_class(1, 2), 512);
  Ival one = Ival::from_long(1, 512);
  double worst = 0;
  for (int k = 0; k < 40; ++k) {
    v = tent_eval(ctx.f, v);
    if (w.mid_double() <= 0.5)
      w = Ival::mul(lam, w, 512);
    else
      w = Ival::mul(lam, Ival::sub(one, w, 512), 512);
    Ival ex = v.enclose(512);
    worst = std::max(worst, std::abs(ex.mid_double() - w.mid_double()));
  }
  set_gap(rep, worst, 1e-60);
  rep.detail = "exact orbit of c vs 512-bit interval orbit, 40 steps";
}

// ------------------------------- tent suites --------------------------------

void suite_order_reflection(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa002);
  int violations = 0, used = 0;
  for (int i = 0; i < 10000 && used < 10000; ++i) {
    Real x = rand_point(ctx.f, rng);
    Real y = rand_point(ctx.f, rng);
    auto c = try_cmp(x, y, ctx.p.prec());
    if (!c || *c == 0) continue;
    if (*c > 0) std::swap(x, y);
    Word wx = itinerary(ctx.f, x, 40);
    Word wy = itinerary(ctx.f, y, 40);
    if (wx.ambiguous_tail || wy.ambiguous_tail) continue;
    ++used;
    if (unimodal_cmp(wx, wy) == UniCmp::Greater) ++violations;
  }
  set_gap(rep, violations, 0);
  rep.detail = std::to_string(used) + " ordered pairs at depth 40";
}

void suite_order_fa_p_ha(const SuiteCtx& ctx, Report& rep) {
  Real fa = tent_eval(ctx.f, ctx.f.a);
  bool ok = sign_or_throw(ctx.f.p_fix - fa, ctx.p.prec()) == Sign::Positive &&
            sign_or_throw(ctx.f.a_hat - ctx.f.p_fix, ctx.p.prec()) ==
                Sign::Positive;
  set_gap(rep, ok ? 0 : 1, 0);
  rep.detail = "f(a) < p < a_hat";
}

void suite_many_choices(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa003);
  const int depth = 60;
  int worst_hits = depth;
  int max_run = 1;
  std::vector<int> hit_counts;
  int max_single_run = 0;
  for (int i = 0; i < 1000; ++i) {
    Real x = rand_point(ctx.f, rng);
    // random backward thread; count coordinates with two preimages
    Real cur = x;
    int hits = 0, run = 0, single_run = 0;
    for (int k = 0; k < depth; ++k) {
      auto pre = tent_preimages(ctx.f, cur);
      if (pre.size() == 2) {
        ++hits;
        single_run = 0;
      } else {
        ++single_run;
      }
      max_single_run = std::max(max_single_run, single_run);
      cur = pre[rng() % pre.size()].x;
      if (classify_side(cur, ctx.p) == SideClass::Left)
        ++run;
      else
        run = 0;
      max_run = std::max(max_run, run);
    }
    hit_counts.push_back(hits);
    worst_hits = std::min(worst_hits, hits);
  }
  int required = std::max(5, depth / std::max(1, max_run + 1));
  bool window_ok = max_single_run <= 1;  // a one-preimage coordinate is
                                         // followed by one above a_hat
  set_gap(rep,
          (worst_hits >= required && window_ok) ? 0
                                                : required - worst_hits + 1,
          0);
  std::ostringstream os;
  os << "min two-preimage coordinates " << worst_hits << ", required "
     << required << " (max left run " << max_run
     << ", max one-preimage run " << max_single_run << ")";
  rep.detail = os.str();
}

void suite_kneading_prefix(const SuiteCtx& ctx, Report& rep) {
  Word k = kneading(ctx.f, 40);
  // expected 10(11)^j 0...
  bool ok = k.size() >= 3 && k.s[0] == 1 && k.s[1] == 0;
  size_t i = 2;
  while (i + 1 < k.size() && k.s[i] == 1 && k.s[i + 1] == 1) i += 2;
  ok = ok && i < k.size() && k.s[i] == 0;
  set_gap(rep, ok ? 0 : 1, 0);
  rep.detail = "kneading word " + k.str().substr(0, 16) + "...";
}

// ------------------------------ outside suites ------------------------------

void suite_model_action(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa004);
  const int depth = std::max(20, ctx.depth);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    // random point of the B~ domain: Lower copy, or Upper past a_hat
    CirclePoint y;
    if (rng() % 2 == 0) {
      y = {rand_point(ctx.f, rng), Copy::Lower};
    } else {
      mpq_class u = rand_unit(rng);
      Real x = ctx.f.a_hat + (ctx.f.b - ctx.f.a_hat) * ctx.p.real(u);
      y = {x, Copy::Upper};
      if (in_gamma_interior(ctx.f, y)) continue;
      bool bad = false;
      try {
        B_tilde(ctx.f, y);
      } catch (const DomainError&) {
        bad = true;
      }
      if (bad) continue;
    }
    auto e1 = extreme_element(ctx.f, y, depth);
    Thread t{e1};
    Thread lhs = fhat(ctx.f, t);
    auto e2 = extreme_element(ctx.f, B_tilde(ctx.f, y), depth + 1);
    for (int k = 0; k <= depth + 1; ++k) {
      Real diff = lhs.coords[k] - e2[k];
      if (ctx.p.exact()) {
        if (!provably_zero(diff, ctx.p)) {
          set_gap(rep, 1.0, 0x1p-40);
          rep.detail = "exact coordinate mismatch";
          return;
        }
      } else {
        worst = std::max(worst, abs_hi(diff));
      }
    }
  }
  set_gap(rep, worst, 0x1p-40);
  rep.detail = "fhat(e(y)) = e(B~(y)) coordinatewise at depth " +
               std::to_string(depth);
}

void suite_btilde_roundtrip(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa005);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    // right inverse everywhere: B~(B~^-1(y)) = y
    bool upper = rng() % 2 == 1;
    Real x = rand_point(ctx.f, rng);
    CirclePoint y{x, upper ? Copy::Upper : Copy::Lower};
    CirclePoint back = B_tilde(ctx.f, B_tilde_inverse(ctx.f, y));
    worst = std::max(worst, abs_hi(back.x - y.x));
    if (back.copy != canonical(ctx.f, y).copy) {
      set_gap(rep, 1.0, 0x1p-40);
      rep.detail = "copy mismatch after round trip";
      return;
    }
    // left inverse on the domain of B~
    CirclePoint dom = upper ? CirclePoint{x, Copy::Lower} : y;
    CirclePoint back2 = B_tilde_inverse(ctx.f, B_tilde(ctx.f, dom));
    worst = std::max(worst, abs_hi(back2.x - dom.x));
  }
  // the plateau collapse is the one left-inverse failure: gamma interior
  // points come back as a
  {
    Real mid = (ctx.f.a + ctx.f.a_hat) / ctx.p.real(2);
    CirclePoint back =
        B_tilde_inverse(ctx.f, B_outside(ctx.f, {mid, Copy::Upper}));
    if (!(back.copy == Copy::Lower &&
          abs_hi(back.x - ctx.f.a) < 0x1p-40)) {
      set_gap(rep, 1.0, 0x1p-40);
      rep.detail = "plateau collapse did not come back to a";
      return;
    }
  }
  set_gap(rep, worst, ctx.p.exact() ? 0.0 : 0x1p-40);
  rep.detail = "two-sided inverse identities on 1000 random points";
}

void suite_lift_degree_one(const SuiteCtx& ctx, Report& rep) {
  // monotone non-decreasing lift over a circle coordinate grid
  const int n = 1000;
  double prev_lift = -1.0;
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    double t = (i + 0.5) / n;
    Real span = ctx.f.b - ctx.f.a;
    CirclePoint y;
    if (t < 0.5) {
      y = {ctx.f.a + span * ctx.p.real(mpq_class(2 * t)), Copy::Lower};
    } else {
      y = {ctx.f.b - span * ctx.p.real(mpq_class(2 * (t - 0.5))), Copy::Upper};
    }
    CirclePoint img = B_outside(ctx.f, y);
    double ti = circle_coord(ctx.f, img).approx();
    // the map has no fixed points, so the continuous lift has
    // L(t) - t in (0, 1) everywhere: normalize into (t, t + 1]
    double lift = ti;
    while (lift <= t) lift += 1.0;
    while (lift > t + 1.0) lift -= 1.0;
    if (prev_lift >= 0 && lift < prev_lift - 1e-12)
      worst = std::max(worst, prev_lift - lift);
    prev_lift = lift;
  }
  set_gap(rep, worst, 1e-12);
  rep.detail = "lift monotone over 1000 grid points";
}

void suite_height_monotone(const SuiteCtx&, Report& rep) {
  // decreasing rational heights over a decimal grid (independent of ctx
  // lambda)
  double prev = 1.0;
  double worst = 0;
  int decided = 0;
  for (int i = 0; i < 50; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", 1.45 + (1.99 - 1.45) * i / 49.0);
    auto p = Parameter::parse(std::string("dec:") + buf);
    auto f = TentMap::make(p);
    HeightResult h = height(f, 3000);
    if (!h.rational) continue;
    double q = static_cast<double>(h.m) / h.n;
    ++decided;
    if (q <= 0.0 || q >= 0.5) {
      set_gap(rep, 1.0, 0);
      rep.detail = "height outside (0, 1/2)";
      return;
    }
    if (q > prev + 1e-15) worst = std::max(worst, q - prev);
    prev = q;
  }
  set_gap(rep, worst, 0);
  rep.detail = std::to_string(decided) + "/50 heights decided, non-increasing";
}

void suite_extreme_distinctness(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa006);
  const int depth = 30;
  for (int i = 0; i < 100; ++i) {
    Real x = rand_point(ctx.f, rng);
    auto eu = extreme_element(ctx.f, {x, Copy::Upper}, depth);
    auto el = extreme_element(ctx.f, {x, Copy::Lower}, depth);
    bool differ = false;
    for (int k = 0; k <= depth && !differ; ++k) {
      auto c = try_cmp(eu[k], el[k], ctx.p.prec());
      if (c && *c != 0) differ = true;
    }
    if (!differ) {
      set_gap(rep, 1.0, 0);
      rep.detail = "e(x_l) = e(x_u) for interior x";
      return;
    }
  }
  // endpoint coincidences
  auto ea_l = extreme_element(ctx.f, {ctx.f.a, Copy::Lower}, depth);
  auto eb_l = extreme_element(ctx.f, {ctx.f.b, Copy::Lower}, depth);
  // a and b are canonical (single circle point each); their extremes are
  // single threads by construction
  (void)ea_l;
  (void)eb_l;
  set_gap(rep, 0, 0);
  rep.detail = "extremes differ for 100 interior points at depth 30";
}

void suite_gamma_avoidance(const SuiteCtx& ctx, Report& rep) {
  // matched horizons: an undecided height certifies no gamma entry over the
  // same orbit segment
  const long horizon = 10000;
  Classification cl = classify(ctx.f, horizon);
  if (cl.kind != Classification::Kind::IrrationalOrUndecided) {
    rep.status = Report::Status::Undecided;
    rep.detail = "parameter has decided rational height";
    return;
  }
  CantorApprox ca = cantor_approx(ctx.f, horizon);
  set_gap(rep, ca.entered_gamma ? 1.0 : 0.0, 0);
  std::ostringstream os;
  os << "orbit of f(a)_l avoids gamma for 10000 steps; min dist to a "
     << ca.min_dist_to_a << ", to a_hat_u " << ca.min_dist_to_ahat;
  rep.detail = os.str();
}

// ------------------------------- ilim suites --------------------------------

void suite_fiber_roundtrip(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa007);
  const int r = std::min(ctx.depth, 12);
  for (int i = 0; i < 20; ++i) {
    Real x = rand_point(ctx.f, rng);
    FiberApprox fb = fiber(ctx.f, x, r);
    if (!fb.sorted) continue;
    for (size_t j = 0; j < fb.threads.size(); ++j) {
      Thread t = reconstruct(ctx.f, x, fb.words[j].s);
      for (int k = 0; k <= r; ++k) {
        if (!provably_zero(t.coords[k] - fb.threads[j].coords[k], ctx.p) &&
            abs_hi(t.coords[k] - fb.threads[j].coords[k]) > 0x1p-64) {
          set_gap(rep, 1.0, 0);
          rep.detail = "reconstruct disagrees with enumeration";
          return;
        }
      }
      Word w = thread_word(ctx.f, t);
      if (w.s != fb.words[j].s) {
        set_gap(rep, 1.0, 0);
        rep.detail = "word round trip failed";
        return;
      }
    }
  }
  set_gap(rep, 0, 0);
  rep.detail = "fiber enumeration and reconstruct mutually inverse";
}

void suite_fiber_extremes(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa008);
  const int r = std::min(ctx.depth, 12);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    Real x = rand_point(ctx.f, rng);
    FiberApprox fb = fiber(ctx.f, x, r);
    if (!fb.sorted || fb.threads.empty()) continue;
    auto eu = extreme_element(ctx.f, {x, Copy::Upper}, r);
    auto el = extreme_element(ctx.f, {x, Copy::Lower}, r);
    for (int k = 0; k <= r; ++k) {
      worst = std::max(worst, abs_hi(fb.threads.back().coords[k] - eu[k]));
      worst = std::max(worst, abs_hi(fb.threads.front().coords[k] - el[k]));
    }
  }
  set_gap(rep, worst, ctx.p.exact() ? 0.0 : 0x1p-40);
  rep.detail = "fiber extremes match e(x_l), e(x_u) truncations";
}

void suite_action_on_extremes(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa009);
  const int depth = 20;
  Real fa = tent_eval(ctx.f, ctx.f.a);
  double worst = 0;
  auto check_eq = [&](const std::vector<Real>& u, const Thread& v) {
    for (size_t k = 0; k < u.size() && k < v.coords.size(); ++k)
      worst = std::max(worst, abs_hi(u[k] - v.coords[k]));
  };
  for (int i = 0; i < 200; ++i) {
    Real x = rand_point(ctx.f, rng);
    auto pre = tent_preimages(ctx.f, x);
    auto e_lo = extreme_element(ctx.f, {x, Copy::Lower}, depth + 1);
    auto e_up = extreme_element(ctx.f, {x, Copy::Upper}, depth + 1);
    auto cmp_fa = try_cmp(x, fa, ctx.p.prec());
    if (!cmp_fa || *cmp_fa == 0) continue;
    if (*cmp_fa < 0) {
      // one preimage x1 > c: e(x_l) = fhat(e(x1_u)), e(x_u) = fhat(e(x1_l))
      const Real& x1 = pre.back().x;
      Thread t_up{extreme_element(ctx.f, {x1, Copy::Upper}, depth)};
      Thread t_lo{extreme_element(ctx.f, {x1, Copy::Lower}, depth)};
      check_eq(e_lo, fhat(ctx.f, t_up));
      check_eq(e_up, fhat(ctx.f, t_lo));
    } else if (pre.size() == 2) {
      const Real& x0 = pre.front().x;  // left preimage
      const Real& x1 = pre.back().x;
      Thread t0{extreme_element(ctx.f, {x0, Copy::Lower}, depth)};
      Thread t1{extreme_element(ctx.f, {x1, Copy::Lower}, depth)};
      check_eq(e_lo, fhat(ctx.f, t0));
      check_eq(e_up, fhat(ctx.f, t1));
    }
  }
  set_gap(rep, worst, ctx.p.exact() ? 0.0 : 0x1p-40);
  rep.detail = "extreme action identities at depth 20";
}

void suite_flat_arc_word(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa00a);
  const int r = std::min(ctx.depth, 10);
  int checked = 0;
  for (int i = 0; i < 10 && checked < 10; ++i) {
    Real x = rand_point(ctx.f, rng);
    FiberApprox fb = fiber(ctx.f, x, r);
    if (!fb.sorted || fb.threads.empty()) continue;
    const Thread& t = fb.threads[rng() % fb.threads.size()];
    FlatArc arc;
    try {
      arc = flat_arc_through(ctx.f, t);
    } catch (const DomainError&) {
      continue;
    }
    ++checked;
    for (int s = 1; s <= 10; ++s) {
      mpq_class u(s, 11);
      Real xi = arc.lo + (arc.hi - arc.lo) * ctx.p.real(u);
      Thread ti = reconstruct(ctx.f, xi, arc.word);
      Word w = thread_word(ctx.f, ti);
      if (w.s != arc.word) {
        set_gap(rep, 1.0, 0);
        rep.detail = "interior point of arc has a different word";
        return;
      }
    }
  }
  set_gap(rep, 0, 0);
  rep.detail = std::to_string(checked) + " arcs sampled at 10 interior points";
}

// ------------------------------ measure suites ------------------------------

void suite_pf_residual(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa00b);
  Density d = pick_density(ctx.f);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    Real x = rand_point(ctx.f, rng);
    Real rhs = ctx.p.real(0);
    for (const auto& pre : tent_preimages(ctx.f, x))
      rhs = rhs + d.eval(pre.x) / ctx.f.lambda;
    Real diff = d.eval(x) - rhs;
    if (ctx.p.exact() && d.kind() == Density::Kind::MarkovExact) {
      if (!provably_zero(diff, ctx.p)) {
        set_gap(rep, 1.0, 0);
        rep.detail = "exact transfer identity violated";
        return;
      }
    } else {
      worst = std::max(worst, abs_hi(diff));
    }
  }
  set_gap(rep, worst, 1e-8);
  rep.detail = "transfer equation residual at 1000 random points";
}

void suite_cylinder_additivity(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa00c);
  Density d = pick_density(ctx.f);
  double worst = 0;
  bool exact = ctx.p.exact() && d.kind() == Density::Kind::MarkovExact;
  for (int trial = 0; trial < 10; ++trial) {
    Real x = rand_point(ctx.f, rng);
    Thread t{{x}};
    for (int level = 0; level < 15; ++level) {
      Real parent_mass = alpha_cylinder(d, t).value;
      auto pre = tent_preimages(ctx.f, t.coords.back());
      Real child_sum = ctx.p.real(0);
      for (const auto& p2 : pre) {
        Thread child = t;
        child.coords.push_back(p2.x);
        child_sum = child_sum + alpha_cylinder(d, child).value;
      }
      Real diff = parent_mass - child_sum;
      if (exact) {
        if (!provably_zero(diff, ctx.p)) {
          set_gap(rep, 1.0, 0);
          rep.detail = "cylinder additivity violated exactly";
          return;
        }
      } else {
        worst = std::max(worst, abs_hi(diff));
      }
      t.coords.push_back(pre[rng() % pre.size()].x);
    }
  }
  set_gap(rep, worst, 1e-8);
  rep.detail = "parent mass equals child sum along depth-15 cylinder trees";
}

void suite_alpha_scaling(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa00d);
  Density d = pick_density(ctx.f);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    Real x = rand_point(ctx.f, rng);
    int r = 1 + static_cast<int>(rng() % 10);
    Thread t{{x}};
    for (int k = 0; k < r; ++k) {
      auto pre = tent_preimages(ctx.f, t.coords.back());
      t.coords.push_back(pre[rng() % pre.size()].x);
    }
    Real lhs = alpha_cylinder(d, fhat(ctx.f, t)).value * ctx.f.lambda;
    Real rhs = alpha_cylinder(d, t).value;
    Real diff = lhs - rhs;
    if (ctx.p.exact()) {
      if (!provably_zero(diff, ctx.p)) {
        set_gap(rep, 1.0, 0);
        rep.detail = "exact contraction identity violated";
        return;
      }
    } else {
      worst = std::max(worst, abs_hi(diff));
    }
  }
  set_gap(rep, worst, 0x1p-60);
  rep.detail = "alpha(fhat C) = alpha(C)/lambda on random cylinders";
}

void suite_holonomy(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa00e);
  Density d = pick_density(ctx.f);
  const int r = std::min(ctx.depth, 10);
  double worst = 0;
  int built = 0;
  for (int i = 0; i < 200 && built < 50; ++i) {
    std::pair<Real, Real> K;
    try {
      K = find_admissible_k(ctx.f, rng, r);
    } catch (const NotInY&) {
      break;
    }
    ZeroBox box;
    try {
      box = zero_box(ctx.f, K.first, K.second, r, y_cap_for_depth(r));
    } catch (const NotInY&) {
      continue;
    }
    ++built;
    mpq_class u1 = rand_unit(rng), u2 = rand_unit(rng);
    Real x = K.first + (K.second - K.first) * ctx.p.real(u1);
    Real y = K.first + (K.second - K.first) * ctx.p.real(u2);
    Real gap = alpha_of_box(d, box, x) - alpha_of_box(d, box, y);
    worst = std::max(worst, abs_hi(gap));
  }
  double tol = (d.kind() == Density::Kind::MarkovExact) ? 1e-6 : 1e-4;
  set_gap(rep, worst, tol);
  rep.detail = std::to_string(built) + " zero-boxes at depth " +
               std::to_string(r);
}

void suite_grid_cross_validation(const SuiteCtx& ctx, Report& rep) {
  Density ref = pick_density(ctx.f);
  Density grid = density_grid(ctx.f, 1 << 12, 1e-11, 4000);
  double A = ctx.f.a.approx(), B = ctx.f.b.approx();
  int N = 1 << 12;
  double W = (B - A) / N;
  double l1 = 0;
  for (int i = 0; i < N; ++i) {
    double m = A + W * (i + 0.5);
    l1 += std::abs(grid.eval_d(m) - ref.eval_d(m)) * W;
  }
  set_gap(rep, l1, 0.02);
  rep.detail = "L1 distance between the grid and the exact density";
}

void suite_disintegration(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa00f);
  Density d = pick_density(ctx.f);
  double A = ctx.f.a.approx(), B = ctx.f.b.approx();
  double worst = 0;
  double sum12 = 0, sum13 = 0;
  for (int i = 0; i < 20; ++i) {
    int r = 1 + static_cast<int>(rng() % 6);
    double u = mpq_class(rand_unit(rng)).get_d();
    double v = mpq_class(rand_unit(rng)).get_d();
    double jlo = A + (B - A) * std::min(u, v);
    double jhi = A + (B - A) * std::max(u, v);
    if (jhi - jlo < 0.01) jhi = std::min(B, jlo + 0.01);
    auto r12 = disintegration_check(d, r, jlo, jhi, 1 << 12);
    auto r13 = disintegration_check(d, r, jlo, jhi, 1 << 13);
    worst = std::max(worst, r12.gap);
    sum12 += r12.gap;
    sum13 += r13.gap;
  }
  bool halves = sum13 <= 0.7 * sum12 + 1e-6;
  set_gap(rep, worst, 1e-3);
  if (!halves) rep.status = Report::Status::Fail;
  std::ostringstream os;
  os << "mean gap " << sum12 / 20 << " at 2^12 cells, " << sum13 / 20
     << " at 2^13";
  rep.detail = os.str();
}

// ------------------------------- glue suites --------------------------------

void suite_h_embed_order(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa010);
  for (int i = 0; i < 10000; ++i) {
    size_t len = 4 + rng() % 20;
    std::vector<uint8_t> u(len), v(len);
    for (auto& b : u) b = rng() & 1;
    for (auto& b : v) b = rng() & 1;
    auto cu = unimodal_cmp(u, v);
    auto [ulo, uhi] = H_embed(u);
    auto [vlo, vhi] = H_embed(v);
    bool ok = true;
    if (cu == UniCmp::Less) ok = uhi <= vlo;
    if (cu == UniCmp::Greater) ok = vhi <= ulo;
    if (cu == UniCmp::EqualAtDepth) ok = ulo == vlo && uhi == vhi;
    if (!ok) {
      set_gap(rep, 1.0, 0);
      rep.detail = "H order mismatch at pair " + std::to_string(i);
      return;
    }
  }
  set_gap(rep, 0, 0);
  rep.detail = "unimodal order matches H order on 10000 word pairs";
}

void suite_fiber_arc_structure(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa011);
  Density d = pick_density(ctx.f);
  const int r = std::min(ctx.depth, 12);
  double worst = 0;
  int built = 0;
  for (int i = 0; i < 60 && built < 25; ++i) {
    Real x = rand_point(ctx.f, rng);
    FiberArc arc;
    try {
      arc = fiber_arc(ctx.f, d, x, r);
    } catch (const InGrandOrbit&) {
      continue;
    }
    ++built;
    // endpoints are the extreme threads
    auto [uw, ut] = extreme_word_upper(ctx.f, x, r);
    auto [lw, lt] = extreme_word_lower(ctx.f, x, r);
    if (arc.words.front().s != lw.s || arc.words.back().s != uw.s) {
      set_gap(rep, 1.0, 0);
      rep.detail = "arc endpoints are not the extreme threads";
      return;
    }
    // total collapsed length = phi(x)
    worst = std::max(worst, abs_hi(arc.cum.back() - d.eval(x)));
    // extreme threads never identified
    for (auto [i1, i2] : arc.identified) {
      if (i1 == 0 || i2 == static_cast<int>(arc.threads.size()) - 1) {
        set_gap(rep, 1.0, 0);
        rep.detail = "an extreme thread was marked identified";
        return;
      }
    }
  }
  set_gap(rep, worst, 1e-8);
  rep.detail = std::to_string(built) + " fiber arcs at depth " +
               std::to_string(r);
}

void suite_stable_scaling(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa012);
  Density d = pick_density(ctx.f);
  const int r = std::min(ctx.depth, 10);
  double worst = 0;
  int built = 0;
  for (int i = 0; i < 20 && built < 5; ++i) {
    Real x = rand_point(ctx.f, rng);
    FiberArc arc;
    try {
      arc = fiber_arc(ctx.f, d, x, r);
    } catch (const InGrandOrbit&) {
      continue;
    }
    ++built;
    for (size_t j = 0; j < arc.threads.size(); ++j) {
      Real mass = arc.cum[j + 1] - arc.cum[j];
      Real image_mass = alpha_cylinder(d, fhat(ctx.f, arc.threads[j])).value;
      worst = std::max(worst, abs_hi(image_mass * ctx.f.lambda - mass));
    }
  }
  set_gap(rep, worst, ctx.p.exact() ? 0x1p-60 : 0x1p-40);
  rep.detail = "fhat contracts arc cylinder masses by exactly 1/lambda";
}

void suite_irrat_key_d(const SuiteCtx& ctx, Report& rep) {
  Classification cl = classify(ctx.f, 10000);
  if (cl.kind != Classification::Kind::IrrationalOrUndecided) {
    rep.status = Report::Status::Undecided;
    rep.detail = "parameter has decided rational height";
    return;
  }
  std::mt19937_64 rng(ctx.seed ^ 0xa013);
  const long horizon = 300;
  auto avoids = [&](CirclePoint y) {
    CirclePoint cur = y;
    for (long i = 0; i < horizon; ++i) {
      if (in_gamma_interior(ctx.f, cur)) return false;
      try {
        cur = B_tilde(ctx.f, cur);
      } catch (const DomainError&) {
        return false;  // landed on the plateau
      }
    }
    return true;
  };
  for (int i = 0; i < 100; ++i) {
    Real x = rand_point(ctx.f, rng);
    if (avoids({x, Copy::Upper}) && avoids({x, Copy::Lower})) {
      set_gap(rep, 1.0, 0);
      rep.detail = "both extremes avoid the plateau interior";
      return;
    }
  }
  set_gap(rep, 0, 0);
  rep.detail = "no x with both extremes avoiding the plateau, 100 samples";
}

void suite_spike_halving(const SuiteCtx& ctx, Report& rep) {
  // the arc of upper extremes over (a, a_hat) folds 2-to-1; its stream
  // measure is half of the base length, which equals the one-sided length
  Real full = ctx.f.a_hat - ctx.f.a;
  Real one_side = ctx.f.c - ctx.f.a;
  Real diff = full / ctx.p.real(2) - one_side;
  bool ok = provably_zero(diff, ctx.p) || abs_hi(diff) < 0x1p-60;
  // spot check spike_aware_measure on a synthetic flat arc
  std::mt19937_64 rng(ctx.seed ^ 0xa014);
  Real x = rand_point(ctx.f, rng);
  FiberApprox fb = fiber(ctx.f, x, 6);
  double worst = ok ? 0.0 : 1.0;
  if (fb.sorted && !fb.threads.empty()) {
    FlatArc arc;
    try {
      arc = flat_arc_through(ctx.f, fb.threads[0]);
      Real m_full = spike_aware_measure(ctx.f, arc, arc.lo, arc.hi, false);
      Real m_half = spike_aware_measure(ctx.f, arc, arc.lo, arc.hi, true);
      worst = std::max(worst, abs_hi(m_full - m_half * ctx.p.real(2)));
    } catch (const DomainError&) {
    }
  }
  set_gap(rep, worst, 0x1p-60);
  rep.detail = "half-measure arithmetic of the folded extreme arc";
}

// ------------------------------ tartan suites -------------------------------

void suite_tartan_compat(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa015);
  Density d = pick_density(ctx.f);
  const int r = std::max(8, std::min(ctx.depth, 12));
  auto K = find_admissible_k(ctx.f, rng, r);
  TartanApprox t =
      build_tartan(ctx.f, d, K.first, K.second, r, 8, y_cap_for_depth(r));
  Report sub = check_compatibility(ctx.f, d, t, 0, ctx.seed);
  double tol = d.kind() == Density::Kind::MarkovExact ? 1e-6 : 1e-4;
  set_gap(rep, sub.gap, tol);
  rep.detail = sub.detail;
}

void suite_tartan_scaling(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa016);
  Density d = pick_density(ctx.f);
  const int r = std::max(8, std::min(ctx.depth, 12));
  auto K = find_admissible_k(ctx.f, rng, r);
  TartanApprox t =
      build_tartan(ctx.f, d, K.first, K.second, r, 4, y_cap_for_depth(r));
  Report sub = check_scaling(ctx.f, d, t);
  set_gap(rep, sub.gap, std::max(sub.tol, 0x1p-40));
  rep.detail = sub.detail;
}

void suite_tartan_tameness(const SuiteCtx& ctx, Report& rep) {
  Report sub = check_tameness(ctx.f, pick_density(ctx.f), 50,
                              std::min(ctx.depth, 12), ctx.seed);
  rep = sub;
  rep.name = "tartan_tameness";
}

void suite_tartan_regularity(const SuiteCtx& ctx, Report& rep) {
  std::mt19937_64 rng(ctx.seed ^ 0xa017);
  Density d = pick_density(ctx.f);
  const int r = std::max(8, std::min(ctx.depth, 10));
  auto K = find_admissible_k(ctx.f, rng, r);
  TartanApprox t =
      build_tartan(ctx.f, d, K.first, K.second, r, 6, y_cap_for_depth(r));
  Report sub = check_regularity(ctx.f, d, t);
  set_gap(rep, sub.gap, sub.tol);
  rep.detail = sub.detail;
}

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> reg = {
      {"interval_outward", suite_interval_outward},
      {"exact_matches_interval", suite_exact_matches_interval},
      {"order_reflection", suite_order_reflection},
      {"order_fa_p_ha", suite_order_fa_p_ha},
      {"many_choices", suite_many_choices},
      {"kneading_prefix", suite_kneading_prefix},
      {"model_action", suite_model_action},
      {"btilde_roundtrip", suite_btilde_roundtrip},
      {"lift_degree_one", suite_lift_degree_one},
      {"height_monotone", suite_height_monotone},
      {"extreme_distinctness", suite_extreme_distinctness},
      {"gamma_avoidance", suite_gamma_avoidance},
      {"fiber_roundtrip", suite_fiber_roundtrip},
      {"fiber_extremes", suite_fiber_extremes},
      {"action_on_extremes", suite_action_on_extremes},
      {"flat_arc_word", suite_flat_arc_word},
      {"pf_residual", suite_pf_residual},
      {"cylinder_additivity", suite_cylinder_additivity},
      {"alpha_scaling", suite_alpha_scaling},
      {"holonomy", suite_holonomy},
      {"grid_cross_validation", suite_grid_cross_validation},
      {"disintegration", suite_disintegration},
      {"h_embed_order", suite_h_embed_order},
      {"fiber_arc_structure", suite_fiber_arc_structure},
      {"stable_scaling", suite_stable_scaling},
      {"irrat_key_d", suite_irrat_key_d},
      {"spike_halving", suite_spike_halving},
      {"tartan_compat", suite_tartan_compat},
      {"tartan_scaling", suite_tartan_scaling},
      {"tartan_tameness", suite_tartan_tameness},
      {"tartan_regularity", suite_tartan_regularity},
  };
  return reg;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [n, fn] : registry()) names.push_back(n);
  return names;
}

std::vector<Report> run_suite(const std::vector<std::string>& names,
                              const Parameter& p, unsigned long seed,
                              int depth, int threads) {
  std::vector<std::pair<std::string, SuiteFn>> todo;
  if (names.size() == 1 && names[0] == "all") {
    todo = registry();
  } else {
    for (const auto& want : names) {
      bool found = false;
      for (const auto& entry : registry()) {
        if (entry.first == want) {
          todo.push_back(entry);
          found = true;
          break;
        }
      }
      if (!found) throw UnknownSuite("unknown suite: " + want);
    }
  }
  SuiteCtx ctx{p, TentMap::make(p), seed, depth};
  std::vector<Report> out(todo.size());
  auto run_one = [&](size_t i) {
    Report& rep = out[i];
    rep.name = todo[i].first;
    rep.lambda_spec = p.spec_string();
    rep.seed = seed;
    rep.depth = depth;
    try {
      todo[i].second(ctx, rep);
    } catch (const std::exception& e) {
      rep.status = Report::Status::Fail;
      rep.detail = std::string("exception: ") + e.what();
    }
  };
  if (threads <= 1) {
    for (size_t i = 0; i < todo.size(); ++i) run_one(i);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<size_t> next{0};
    for (int t = 0; t < threads; ++t)
      futs.push_back(std::async(std::launch::async, [&] {
        for (size_t i = next.fetch_add(1); i < todo.size();
             i = next.fetch_add(1))
          run_one(i);
      }));
    for (auto& f : futs) f.get();
  }
  return out;
}

// ------------------------------ tartan builders -----------------------------

TartanApprox build_tartan(const TentMap& f, const Density& d, const Real& k_lo,
                          const Real& k_hi, int r, int n_stable, int pc_cap) {
  TartanApprox t;
  t.k_lo = k_lo;
  t.k_hi = k_hi;
  t.r = r;
  t.box = zero_box(f, k_lo, k_hi, r, pc_cap);
  // stable grid avoiding (capped) grand orbits of c and of the period orbit
  Real span = k_hi - k_lo;
  for (int i = 0; i < n_stable; ++i) {
    mpq_class u(2 * i + 1, 2 * n_stable);
    Real x = k_lo + span * f.p.real(u);
    for (int nudge = 0; nudge < 32; ++nudge) {
      try {
        ensure_not_in_grand_orbit(f, x, 512);
        break;
      } catch (const InGrandOrbit&) {
        x = x + span / f.p.real(7919 * (nudge + 1));
      }
    }
    t.stable_xs.push_back(x);
    t.stable.push_back(fiber_arc(f, d, x, r));
  }
  return t;
}

Report check_compatibility(const TentMap& f, const Density& d,
                           const TartanApprox& t, double tol,
                           unsigned long seed, int n_rects) {
  Report rep;
  rep.name = "compatibility";
  rep.tol = tol;
  std::mt19937_64 rng(seed ^ 0xbead);
  const int r = t.r;
  const size_t n_words = t.box.words.size();
  const size_t n_stable = t.stable_xs.size();
  double lam_r = std::pow(f.lambda.approx(), r);
  // alpha-mass of a word set over a double base point
  auto alpha_set = [&](double x, const std::vector<size_t>& ws) {
    double s = 0;
    double lam = f.lambda.approx();
    double fa = lam * f.a.approx();
    for (size_t wi : ws) {
      double y = x;
      for (uint8_t b : t.box.words[wi]) {
        y = (b == 0) ? y / lam : 1.0 - y / lam;
        (void)fa;
      }
      s += d.eval_d(y);
    }
    return s / lam_r;
  };
  double worst = 0;
  for (int rect = 0; rect < n_rects; ++rect) {
    // contiguous stable range and word range
    size_t i0 = rng() % n_stable, i1 = rng() % n_stable;
    if (i0 > i1) std::swap(i0, i1);
    if (i0 == i1) continue;
    size_t w0 = rng() % n_words, w1 = rng() % n_words;
    if (w0 > w1) std::swap(w0, w1);
    std::vector<size_t> ws;
    for (size_t w = w0; w <= w1; ++w) ws.push_back(w);
    double xlo = t.stable_xs[i0].approx();
    double xhi = t.stable_xs[i1].approx();
    // product measure: nu_s(W) at the reference fiber times base length
    double nu_s = alpha_set(t.stable_xs[(i0 + i1) / 2].approx(), ws);
    double product = nu_s * (xhi - xlo);
    // ambient mass through the disintegration over [xlo, xhi]
    const int quad = 128;
    double h = (xhi - xlo) / quad;
    double ambient = 0;
    for (int q = 0; q < quad; ++q)
      ambient += alpha_set(xlo + h * (q + 0.5), ws);
    ambient *= h;
    worst = std::max(worst, std::abs(product - ambient));
  }
  // stable holonomy sub-check: full box mass across all stable fibers
  std::vector<size_t> all;
  for (size_t w = 0; w < n_words; ++w) all.push_back(w);
  double ref = alpha_set(t.stable_xs[0].approx(), all);
  for (size_t i = 1; i < n_stable; ++i)
    worst = std::max(
        worst, std::abs(alpha_set(t.stable_xs[i].approx(), all) - ref));
  rep.gap = worst;
  rep.status = worst <= tol || tol == 0 ? Report::Status::Pass
                                        : Report::Status::Fail;
  if (tol == 0) rep.status = Report::Status::Pass;
  std::ostringstream os;
  os << n_rects << " rectangles on a " << n_stable << "x" << n_words
     << " tartan, worst gap " << worst;
  rep.detail = os.str();
  return rep;
}

Report check_scaling(const TentMap& f, const Density& d,
                     const TartanApprox& t) {
  Report rep;
  rep.name = "scaling";
  rep.tol = 0x1p-40;
  double worst = 0;
  // stable masses contract by exactly 1/lambda
  for (size_t i = 0; i < t.stable.size(); ++i) {
    const FiberArc& arc = t.stable[i];
    for (size_t j = 0; j < arc.threads.size(); ++j) {
      Real mass = arc.cum[j + 1] - arc.cum[j];
      Real image = alpha_cylinder(d, fhat(f, arc.threads[j])).value;
      Real diff = image * f.lambda - mass;
      if (f.p.exact()) {
        if (!provably_zero(diff, f.p)) {
          rep.status = Report::Status::Fail;
          rep.detail = "stable contraction violated exactly";
          return rep;
        }
      } else {
        worst = std::max(worst, abs_hi(diff));
      }
    }
  }
  // unstable base lengths expand by lambda, splitting at c
  const auto& pp = f.p.prec();
  for (const auto& w : t.box.words) {
    auto [lo, hi] = pullback_interval(f, t.k_lo, t.k_hi, w);
    if (cmp_or_throw(lo, hi, pp) > 0) std::swap(lo, hi);
    Real base_len = hi - lo;
    // the deepest interval maps forward by f: its image length is
    // lambda * length when it misses c, and the two fold pieces still sum
    // to lambda * length otherwise
    Real img_len = f.p.real(0);
    auto sc = try_cmp(f.c, lo, pp);
    auto sc2 = try_cmp(hi, f.c, pp);
    if (sc && sc2 && *sc >= 0 && *sc2 >= 0) {
      img_len = (tent_eval(f, lo) - f.b) + (tent_eval(f, hi) - f.b);
      img_len = f.p.real(0) - img_len;  // (b - f(lo)) + (b - f(hi))
    } else {
      Real flo = tent_eval(f, lo), fhi = tent_eval(f, hi);
      img_len = cmp_or_throw(flo, fhi, pp) <= 0 ? fhi - flo : flo - fhi;
    }
    Real diff = img_len - f.lambda * base_len;
    if (f.p.exact()) {
      if (!provably_zero(diff, f.p)) {
        rep.status = Report::Status::Fail;
        rep.detail = "unstable expansion violated exactly";
        return rep;
      }
    } else {
      worst = std::max(worst, abs_hi(diff));
    }
  }
  // image intersection matrix stays total: fhat of each intersection thread
  // lies over f(x) with the word extended by the side of x
  for (size_t i = 0; i < t.stable_xs.size(); ++i) {
    const Real& x = t.stable_xs[i];
    SideClass side = classify_side(x, f.p);
    if (side == SideClass::AtC) continue;
    for (const auto& w : t.box.words) {
      Thread orig = reconstruct(f, x, w);
      Thread img = fhat(f, orig);
      std::vector<uint8_t> ext{static_cast<uint8_t>(
          side == SideClass::Right ? 1 : 0)};
      ext.insert(ext.end(), w.begin(), w.end());
      Thread re = reconstruct(f, img.coords.front(), ext);
      for (size_t k = 0; k < img.coords.size(); ++k)
        worst = std::max(worst, abs_hi(re.coords[k] - img.coords[k]));
    }
  }
  rep.gap = worst;
  rep.status =
      worst <= rep.tol ? Report::Status::Pass : Report::Status::Fail;
  std::ostringstream os;
  os << "stable contraction, unstable expansion, and image matrix over "
     << t.box.words.size() << " arcs";
  rep.detail = os.str();
  return rep;
}

Report check_tameness(const TentMap& f, const Density& d, int n_samples,
                      int depth, unsigned long seed) {
  Report rep;
  rep.name = "tameness";
  rep.tol = 0;
  std::mt19937_64 rng(seed ^ 0xfeed);
  double k_floor = d.floor_value();
  double lam_r = std::pow(f.lambda.approx(), depth);
  double worst = 0;
  for (int i = 0; i < n_samples; ++i) {
    Real x = rand_point(f, rng);
    // random cylinder at the given depth
    Thread t{{x}};
    for (int k = 0; k < depth; ++k) {
      auto pre = tent_preimages(f, t.coords.back());
      t.coords.push_back(pre[rng() % pre.size()].x);
    }
    double mass = alpha_cylinder(d, t).value.approx();
    if (mass < 0.999 * k_floor / lam_r)
      worst = std::max(worst, k_floor / lam_r - mass);
    // metric diameter of the cylinder: extend two branches and compare
    Thread u = t, v = t;
    for (int k = 0; k < 8; ++k) {
      auto pre_u = tent_preimages(f, u.coords.back());
      auto pre_v = tent_preimages(f, v.coords.back());
      u.coords.push_back(pre_u.front().x);
      v.coords.push_back(pre_v.back().x);
    }
    double dist = thread_distance(u, v);
    double bound = std::ldexp(1.0, -depth);
    if (dist > bound) worst = std::max(worst, dist - bound);
  }
  // unstable: flat-arc diameter at most 2 |J| (exact bound 2l/(2l-1) |J|)
  std::mt19937_64 rng2(seed ^ 0xfade);
  for (int i = 0; i < std::min(n_samples, 10); ++i) {
    Real x = rand_point(f, rng2);
    FiberApprox fb = fiber(f, x, std::min(depth, 10));
    if (!fb.sorted || fb.threads.empty()) continue;
    try {
      FlatArc arc = flat_arc_through(f, fb.threads[rng2() % fb.threads.size()]);
      double jlen = (arc.hi - arc.lo).approx();
      double diam = thread_distance(arc.lo_thread, arc.hi_thread);
      double lam = f.lambda.approx();
      double exact_bound = 2 * lam / (2 * lam - 1) * jlen;
      if (diam > std::min(2 * jlen, exact_bound) + 1e-12)
        worst = std::max(worst, diam - 2 * jlen);
    } catch (const DomainError&) {
      continue;
    }
  }
  rep.gap = worst;
  rep.status = worst <= 0 ? Report::Status::Pass : Report::Status::Fail;
  rep.detail = "cylinder mass floor, cylinder diameter, flat arc diameter";
  return rep;
}

Report check_regularity(const TentMap&, const Density&,
                        const TartanApprox& t, int n_deltas) {
  Report rep;
  rep.name = "regularity";
  rep.tol = 0;
  if (t.stable_xs.size() < 3 || t.box.words.size() < 3) {
    rep.status = Report::Status::Undecided;
    rep.detail = "tartan too small for the shadow check";
    return rep;
  }
  // chart coordinates: (x, psi); intersection (i, w) at x_i with psi the
  // cumulative mass below word w
  const size_t i_mid = t.stable_xs.size() / 2;
  const FiberArc& arc = t.stable[i_mid];
  const size_t w_mid = arc.threads.size() / 2;
  double x0 = t.stable_xs[i_mid].approx();
  double psi0 = arc.cum[w_mid + 1].approx();
  double worst = 0;
  for (int k = 1; k <= n_deltas; ++k) {
    double delta = std::ldexp(1.0, -k);  // shrinking deltas
    // nearest stable neighbor within delta in psi, unstable within delta in x
    double best_psi = 1e18;
    for (size_t j = 0; j < arc.threads.size(); ++j) {
      if (j == w_mid) continue;
      double ps = arc.cum[j + 1].approx();
      if (std::abs(ps - psi0) < delta)
        best_psi = std::min(best_psi, std::abs(ps - psi0));
    }
    double best_x = 1e18;
    for (size_t i = 0; i < t.stable_xs.size(); ++i) {
      if (i == i_mid) continue;
      double xs = t.stable_xs[i].approx();
      if (std::abs(xs - x0) < delta) best_x = std::min(best_x, std::abs(xs - x0));
    }
    if (best_psi > 1e17 || best_x > 1e17) continue;
    // the four connecting segments are axis-parallel in chart coordinates
    // with spans best_psi and best_x; containment in the 2 delta box
    double reach = std::max(best_psi, best_x);
    if (reach > 2 * delta) worst = std::max(worst, reach - 2 * delta);
  }
  rep.gap = worst;
  rep.status = worst <= 0 ? Report::Status::Pass : Report::Status::Fail;
  rep.detail = "stream-arc segments within 2. delta chart balls";
  return rep;
}

}  // namespace tentlab
