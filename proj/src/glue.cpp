#include "tentlab/glue.hpp"

#include <algorithm>
#include <cmath>

namespace tentlab {

std::pair<mpq_class, mpq_class> H_embed(const std::vector<uint8_t>& word) {
  // H(s) = sum 2 eps_r / 3^(r+1); a finite word spans an interval of width
  // 3^-len over its continuations.
  mpq_class lo(0);
  mpq_class scale(1, 3);
  int parity = 0;
  for (uint8_t s : word) {
    parity = (parity + s) & 1;
    if (parity) lo += 2 * scale;
    scale /= 3;
  }
  // tail sup: sum_{r >= len} 2/3^(r+1) = 3^-len = 3 * scale
  return {lo, lo + scale * 3};
}

namespace {

bool provably_equal_real(const Real& x, const Real& y, const Parameter& p) {
  if (p.exact()) {
    auto s = try_sign(x - y, p.prec());
    return s && *s == Sign::Zero;
  }
  auto rx = x.exact_rational();
  auto ry = y.exact_rational();
  return rx && ry && *rx == *ry;
}

}  // namespace

// Capped grand-orbit test: the forward orbit of x (64 steps) against c and
// the first go_cap postcritical points, with a double prefilter and a
// rigorous confirmation of near hits.
void ensure_not_in_grand_orbit(const TentMap& f, const Real& x, int go_cap) {
  std::vector<double> pc;
  pc.reserve(go_cap);
  {
    Real v = f.b;
    for (int j = 1; j <= go_cap; ++j) {
      pc.push_back(v.approx());
      if (j < go_cap) v = tent_eval(f, v);
    }
  }
  std::sort(pc.begin(), pc.end());
  const double tol = 0x1p-40;
  Real v = x;
  for (int m = 0; m <= 64; ++m) {
    if (classify_side(v, f.p) == SideClass::AtC)
      throw InGrandOrbit("forward orbit of x hits c at step " +
                         std::to_string(m));
    double dv = v.approx();
    auto it = std::lower_bound(pc.begin(), pc.end(), dv - tol);
    if (it != pc.end() && *it < dv + tol) {
      // rigorous confirmation against the actual orbit
      Real w = f.b;
      for (int j = 1; j <= go_cap; ++j) {
        if (std::abs(w.approx() - dv) < tol) {
          auto s = try_sign(v - w, f.p.prec());
          if (s && *s == Sign::Zero)
            throw InGrandOrbit("f^" + std::to_string(m) +
                               "(x) meets the critical orbit");
        }
        if (j < go_cap) w = tent_eval(f, w);
      }
    }
    if (m < 64) v = tent_eval(f, v);
  }
}

FiberArc fiber_arc(const TentMap& f, const Density& d, const Real& x, int r,
                   int guard, int go_cap) {
  ensure_not_in_grand_orbit(f, x, go_cap);
  FiberArc arc;
  arc.x = x;
  arc.r = r;
  FiberApprox fb = fiber(f, x, r);
  if (!fb.sorted)
    throw InGrandOrbit("fiber enumeration met c: x is postcritical");
  arc.threads = std::move(fb.threads);
  arc.words = std::move(fb.words);
  arc.cum.reserve(arc.threads.size() + 1);
  arc.cum.push_back(f.p.real(0));
  for (size_t i = 0; i < arc.threads.size(); ++i) {
    auto [hlo, hhi] = H_embed(arc.words[i].s);
    arc.h_lo.push_back(hlo);
    arc.h_hi.push_back(hhi);
    Real mass = alpha_cylinder(d, arc.threads[i]).value;
    arc.cum.push_back(arc.cum.back() + mass);
  }
  for (size_t i = 0; i + 1 < arc.threads.size(); ++i) {
    if (consecutive(f, arc.threads[i], arc.threads[i + 1], guard))
      arc.identified.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
  }
  return arc;
}

Thread extreme_thread(const TentMap& f, const CirclePoint& y, int m,
                      int depth) {
  if (m <= 0) {
    // fhat^m(e(y)) = e(B~^m(y)) for m <= 0
    CirclePoint cur = y;
    for (int i = 0; i < -m; ++i) cur = B_tilde_inverse(f, cur);
    auto coords = extreme_element(f, cur, depth);
    Thread t;
    t.coords = std::move(coords);
    return t;
  }
  auto coords = extreme_element(f, y, depth);
  Thread t;
  t.coords = std::move(coords);
  for (int i = 0; i < m; ++i) {
    t = fhat(f, t);
    t.coords.pop_back();  // keep the requested depth
  }
  return t;
}

IdentClass identify_partner(const TentMap& f, const Classification& cl,
                            const CirclePoint& y_in, int k, int depth,
                            long horizon) {
  const Parameter& p = f.p;
  IdentClass out;
  CirclePoint y = canonical(f, y_in);
  const bool rational = cl.h.rational;
  // z = f^n(a), the gamma entry of the orbit of a (rational case)
  Real z = f.p.real(0);
  bool have_z = false;
  if (rational) {
    Real v = f.a;
    for (long i = 0; i < cl.h.n; ++i) v = tent_eval(f, v);
    z = v;
    have_z = true;
  }
  Real z_hat = f.p.real(1) - z;

  // walk the forward B~-orbit of y to its first plateau-interior entry
  CirclePoint cur = y;
  long s = -1;
  long ahat_hit = -1;
  for (long i = 0; i <= horizon; ++i) {
    if (in_gamma_interior(f, cur)) {
      s = i;
      break;
    }
    // a_hat_u bounds the B~ domain: its extreme belongs to the
    // three-element class (rational general) or to the Cantor class.
    if (cur.copy == Copy::Upper && provably_equal_real(cur.x, f.a_hat, p)) {
      ahat_hit = i;
      break;
    }
    if (i < horizon) cur = B_tilde(f, cur);
  }
  if (ahat_hit >= 0 && rational) {
    if (cl.kind != Classification::Kind::RationalGeneral)
      throw TypeMismatch(
          "three-element classes exist only for rational general type");
    int r_eff = static_cast<int>(k - ahat_hit - cl.h.n);
    out.kind = IdentClass::Kind::EII;
    out.gamma_entry = ahat_hit;
    out.fhat_exponent = r_eff;
    out.members = {
        extreme_thread(f, {z_hat, Copy::Upper}, r_eff, depth),
        extreme_thread(f, {f.a, Copy::Lower},
                       r_eff + static_cast<int>(cl.h.n), depth),
        extreme_thread(f, {f.a_hat, Copy::Upper},
                       r_eff + static_cast<int>(cl.h.n), depth),
    };
    return out;
  }
  if (ahat_hit >= 0 && !rational) {
    out.kind = IdentClass::Kind::EII;
    out.gamma_entry = ahat_hit;
    out.members = {extreme_thread(f, y, k, depth)};
    return out;
  }
  if (s >= 0) {
    // cur = w_u in the plateau interior
    Real w = cur.x;
    if (classify_side(w, p) == SideClass::AtC) {
      // e(c_u) orbit: singleton class
      out.kind = IdentClass::Kind::Trivial;
      out.gamma_entry = s;
      out.members = {extreme_thread(f, y, k, depth)};
      return out;
    }
    if (rational && have_z &&
        (provably_equal_real(w, z, p) || provably_equal_real(w, z_hat, p))) {
      if (cl.kind != Classification::Kind::RationalGeneral)
        throw TypeMismatch(
            "three-element classes exist only for rational general type");
      // members {fhat^r e(z_hat_u), fhat^{r+n} e(a), fhat^{r+n} e(a_hat_u)};
      // e(z_u) = fhat^n(e(a)), so a z_u entry shifts the exponent by n.
      int r_eff = provably_equal_real(w, z_hat, p)
                      ? static_cast<int>(k - s)
                      : static_cast<int>(k - s - cl.h.n);
      out.kind = IdentClass::Kind::EII;
      out.gamma_entry = s;
      out.fhat_exponent = r_eff;
      out.members = {
          extreme_thread(f, {z_hat, Copy::Upper}, r_eff, depth),
          extreme_thread(f, {f.a, Copy::Lower},
                         r_eff + static_cast<int>(cl.h.n), depth),
          extreme_thread(f, {f.a_hat, Copy::Upper},
                         r_eff + static_cast<int>(cl.h.n), depth),
      };
      return out;
    }
    out.kind = IdentClass::Kind::EI;
    out.gamma_entry = s;
    out.fhat_exponent = static_cast<int>(k - s);
    Real w_mirror = f.p.real(1) - w;
    out.members = {
        extreme_thread(f, {w, Copy::Upper}, static_cast<int>(k - s), depth),
        extreme_thread(f, {w_mirror, Copy::Upper}, static_cast<int>(k - s),
                       depth),
    };
    return out;
  }
  // no plateau-interior entry within the horizon
  if (rational) {
    // candidate for the period-n orbit P
    CirclePoint probe = y;
    for (long i = 0; i < cl.h.n; ++i) probe = B_outside(f, probe);
    bool periodic = probe.copy == y.copy && provably_equal_real(probe.x, y.x, p);
    if (periodic) {
      out.kind = IdentClass::Kind::EIII;
      out.members.reserve(cl.h.n);
      CirclePoint w = y;
      for (long i = 0; i < cl.h.n; ++i) {
        out.members.push_back(extreme_thread(f, w, 0, depth));
        w = B_outside(f, w);
      }
      return out;
    }
    out.kind = IdentClass::Kind::Trivial;
    out.members = {extreme_thread(f, y, k, depth)};
    return out;
  }
  // irrational or undecided: the orbit stays in the Cantor set class
  out.kind = IdentClass::Kind::EII;
  out.members = {extreme_thread(f, y, k, depth)};
  return out;
}

ChartPatch chart_patch(const TentMap& f, const Density& d, const Real& lo,
                       const Real& hi, int r, int n_samples, int pc_cap) {
  ZeroBox box = zero_box(f, lo, hi, r, pc_cap);  // NotInY propagates
  ChartPatch patch;
  patch.lo = lo;
  patch.hi = hi;
  patch.r = r;
  patch.words = box.words;
  double dlo = lo.approx(), dhi = hi.approx();
  patch.xs.resize(n_samples);
  for (int i = 0; i < n_samples; ++i)
    patch.xs[i] = dlo + (dhi - dlo) * (i + 0.5) / n_samples;
  patch.psi.assign(patch.words.size(),
                   std::vector<double>(n_samples, 0.0));
  double lam_r = std::pow(f.lambda.approx(), r);
  for (int xi = 0; xi < n_samples; ++xi) {
    Real x = f.p.real(mpq_class(patch.xs[xi]));
    double cum = 0;
    for (size_t w = 0; w < patch.words.size(); ++w) {
      Thread t = reconstruct(f, x, patch.words[w]);
      cum += d.eval_d(t.coords.back().approx()) / lam_r;
      patch.psi[w][xi] = cum;
    }
  }
  return patch;
}

namespace {

// Continuation of a streamline past one endpoint of an arc: flip the branch
// at the binding c-level.
FlatArc continue_past(const TentMap& f, const FlatArc& arc, bool at_hi) {
  int k = at_hi ? arc.bind_hi : arc.bind_lo;
  bool at_c = at_hi ? arc.bind_hi_at_c : arc.bind_lo_at_c;
  if (k == 0)
    throw DepthExhausted("arc end bound by the core interval, not a c-fold");
  if (!at_c)
    throw DepthExhausted(
        "arc end binds at a branch boundary below depth; deepen to continue");
  std::vector<uint8_t> w = arc.word;
  w[k - 1] ^= 1;
  return flat_arc_of_word(f, w);
}

}  // namespace

Streamline trace_streamline(const TentMap& f, const Thread& seed, int steps) {
  Streamline line;
  line.arcs.push_back(flat_arc_through(f, seed));
  // Orientation state: which geometric end of the front/back arc continues
  // the line. The junction equals one endpoint of the continuation arc; the
  // two ends are macroscopically separated, so doubles identify it.
  auto free_end_is_hi = [](const FlatArc& next, double junction) {
    return std::abs(junction - next.hi.approx()) >
           std::abs(junction - next.lo.approx());
  };
  bool back_at_hi = true;
  bool front_at_hi = false;
  while (static_cast<int>(line.arcs.size()) < steps &&
         !(line.exhausted_lo && line.exhausted_hi)) {
    if (!line.exhausted_hi) {
      try {
        const FlatArc& last = line.arcs.back();
        FlatArc next = continue_past(f, last, back_at_hi);
        double junction = (back_at_hi ? last.hi : last.lo).approx();
        back_at_hi = free_end_is_hi(next, junction);
        line.arcs.push_back(std::move(next));
      } catch (const DepthExhausted&) {
        line.exhausted_hi = true;
      } catch (const NotRealizable&) {
        line.exhausted_hi = true;  // degenerate continuation (PCF folding)
      }
    }
    if (static_cast<int>(line.arcs.size()) >= steps) break;
    if (!line.exhausted_lo) {
      try {
        const FlatArc& first = line.arcs.front();
        FlatArc next = continue_past(f, first, front_at_hi);
        double junction = (front_at_hi ? first.hi : first.lo).approx();
        front_at_hi = free_end_is_hi(next, junction);
        line.arcs.push_front(std::move(next));
      } catch (const DepthExhausted&) {
        line.exhausted_lo = true;
      } catch (const NotRealizable&) {
        line.exhausted_lo = true;
      }
    }
  }
  return line;
}

CantorApprox cantor_approx(const TentMap& f, long horizon) {
  CantorApprox ca;
  CirclePoint cur{f.a, Copy::Lower};
  for (long k = 1; k <= horizon; ++k) {
    cur = B_tilde(f, cur);
    if (in_gamma_closed(f, cur)) {
      ca.entered_gamma = true;
      ca.entered_step = k;
      break;
    }
    ca.points.push_back(cur);
    ca.ts.push_back(circle_coord(f, cur).approx());
    if (cur.copy == Copy::Lower) {
      double dist = (cur.x - f.a).approx();
      ca.min_dist_to_a = std::min(ca.min_dist_to_a, std::abs(dist));
    } else {
      double dist = (cur.x - f.a_hat).approx();
      if (dist > 0) ca.min_dist_to_ahat = std::min(ca.min_dist_to_ahat, dist);
    }
  }
  std::vector<double> sorted = ca.ts;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i + 1] - sorted[i] > 0)
      ca.gaps.emplace_back(sorted[i], sorted[i + 1]);
  if (!sorted.empty())
    ca.gaps.emplace_back(sorted.back(), sorted.front() + 1.0);  // wrap gap
  std::sort(ca.gaps.begin(), ca.gaps.end(),
            [](const auto& u, const auto& v) {
              return (u.second - u.first) > (v.second - v.first);
            });
  return ca;
}

Real spike_aware_measure(const TentMap& f, const FlatArc& arc,
                         const Real& sub_lo, const Real& sub_hi,
                         bool is_spike) {
  Real m = unstable_measure(f, arc, sub_lo, sub_hi);
  if (!is_spike) return m;
  return m / f.p.real(2);
}

}  // namespace tentlab
