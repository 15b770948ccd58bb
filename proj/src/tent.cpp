#include "tentlab/tent.hpp"

#include <cmath>

namespace tentlab {

TentMap TentMap::make(const Parameter& p) {
  Real one = p.real(1);
  Real half = p.real(mpq_class(1, 2));
  Real lam = p.lambda();
  Real b = lam * half;         // f(c)
  Real a = lam * (one - b);    // f(b)
  return TentMap{p, lam, a, b, half, one - a, lam / (one + lam)};
}

Real tent_eval(const TentMap& f, const Real& x) {
  // domain check with a provable margin
  auto sa = try_sign(x - f.a, f.p.prec());
  auto sb = try_sign(f.b - x, f.p.prec());
  if ((sa && *sa == Sign::Negative) || (sb && *sb == Sign::Negative))
    throw DomainError("tent_eval: x outside the core interval");
  SideClass side = classify_side(x, f.p);
  switch (side) {
    case SideClass::Left:
      return f.lambda * x;
    case SideClass::Right:
    case SideClass::AtC:
      // at c both branches give b
      return f.lambda * (f.p.real(1) - x);
    case SideClass::Uncertain:
      throw PrecisionExhausted("tent_eval: side of c undecided");
  }
  throw std::logic_error("unreachable");
}

Real tent_hat(const TentMap& f, const Real& x) {
  const auto& pp = f.p.prec();
  if (classify_side(x, f.p) == SideClass::AtC)
    throw DomainError("tent_hat: x = c has no mirror point");
  auto below = try_sign(x - f.a, pp);
  auto above = try_sign(f.a_hat - x, pp);
  if ((below && *below == Sign::Negative) ||
      (above && *above == Sign::Negative))
    throw DomainError("tent_hat: x outside [a, a_hat]");
  return f.p.real(1) - x;
}

std::vector<Preimage> tent_preimages(const TentMap& f, const Real& y) {
  const auto& pp = f.p.prec();
  auto sa = try_sign(y - f.a, pp);
  auto sb = try_sign(f.b - y, pp);
  if ((sa && *sa == Sign::Negative) || (sb && *sb == Sign::Negative))
    throw DomainError("tent_preimages: y outside the core interval");
  std::vector<Preimage> out;
  Real right = f.p.real(1) - y / f.lambda;
  // y = b collapses both branches onto c.
  if (sb && *sb == Sign::Zero) {
    out.push_back({right, 1});  // right = c here
    return out;
  }
  auto has_left = try_sign(y - f.lambda * f.a, pp);  // y >= f(a)?
  if (has_left && *has_left != Sign::Negative)
    out.push_back({y / f.lambda, 0});
  out.push_back({right, 1});
  return out;
}

std::string Word::str() const {
  std::string r;
  r.reserve(s.size());
  for (uint8_t b : s) r.push_back(b ? '1' : '0');
  if (ambiguous_tail) r.push_back('?');
  return r;
}

UniCmp unimodal_cmp(const std::vector<uint8_t>& s,
                    const std::vector<uint8_t>& t) {
  size_t n = std::min(s.size(), t.size());
  int parity = 0;
  for (size_t r = 0; r < n; ++r) {
    if (s[r] != t[r]) {
      // s precedes t iff sum_{i<=r} s_i is even
      int sum_par = (parity + s[r]) & 1;
      bool s_first = sum_par == 0;
      return s_first ? UniCmp::Less : UniCmp::Greater;
    }
    parity = (parity + s[r]) & 1;
  }
  return UniCmp::EqualAtDepth;
}

UniCmp unimodal_cmp(const Word& s, const Word& t) {
  return unimodal_cmp(s.s, t.s);
}

std::vector<Real> postcritical_orbit(const TentMap& f, int depth_cap) {
  std::vector<Real> orb;
  orb.reserve(depth_cap);
  Real v = f.b;  // f(c)
  orb.push_back(v);
  for (int k = 2; k <= depth_cap; ++k) {
    v = tent_eval(f, v);
    orb.push_back(v);
  }
  return orb;
}

namespace {

// Numeric near-coincidence: |x - y| < 2^-64 certified by intervals.
bool numerically_equal(const Real& x, const Real& y, const PrecPolicy& pp) {
  Ival d = (x - y).enclose(std::max<mpfr_prec_t>(pp.def, 128), pp.cap);
  double alo = d.lo_double(), ahi = d.hi_double();
  const double tol = std::ldexp(1.0, -64);
  return alo > -tol && ahi < tol;
}

}  // namespace

PostcriticalProfile postcritical_profile(const TentMap& f, int depth_cap) {
  PostcriticalProfile prof;
  const auto& pp = f.p.prec();
  const bool exact = f.p.exact();
  std::vector<Real> orb;   // orb[k] = f^{k+1}(c)
  std::vector<double> apx;
  Real v = f.b;
  for (int k = 1; k <= depth_cap; ++k) {
    // v = f^k(c); compare with c and with earlier orbit points
    auto against_c = [&](const Real& w) -> bool {
      if (exact) {
        auto s = try_sign(w - f.c, pp);
        return s && *s == Sign::Zero;
      }
      auto r = w.exact_rational();
      if (r) return *r == mpq_class(1, 2);
      return false;
    };
    if (against_c(v)) {
      prof.kind = PostcriticalProfile::Kind::PeriodicC;
      prof.period = k;
      return prof;
    }
    if (!exact && numerically_equal(v, f.c, pp) && !v.exact_rational()) {
      prof.kind = PostcriticalProfile::Kind::PeriodicC;
      prof.period = k;
      prof.numeric = true;
      return prof;
    }
    double dv = v.approx();
    for (size_t j = 0; j < orb.size(); ++j) {
      if (std::abs(apx[j] - dv) > std::ldexp(1.0, -48)) continue;
      if (exact) {
        auto s = try_sign(v - orb[j], pp);
        if (s && *s == Sign::Zero) {
          prof.kind = PostcriticalProfile::Kind::PreperiodicC;
          prof.preperiod = static_cast<int>(j) + 1;
          prof.period = k - (static_cast<int>(j) + 1);
          return prof;
        }
      } else {
        auto rv = v.exact_rational();
        auto rj = orb[j].exact_rational();
        if (rv && rj) {
          if (*rv == *rj) {
            prof.kind = PostcriticalProfile::Kind::PreperiodicC;
            prof.preperiod = static_cast<int>(j) + 1;
            prof.period = k - (static_cast<int>(j) + 1);
            return prof;
          }
          continue;  // provably distinct, no numeric coincidence
        }
        if (numerically_equal(v, orb[j], pp)) {
          prof.kind = PostcriticalProfile::Kind::PreperiodicC;
          prof.preperiod = static_cast<int>(j) + 1;
          prof.period = k - (static_cast<int>(j) + 1);
          prof.numeric = true;
          return prof;
        }
      }
    }
    orb.push_back(v);
    apx.push_back(dv);
    if (k < depth_cap) v = tent_eval(f, v);
  }
  prof.kind = PostcriticalProfile::Kind::InfiniteWithinCap;
  return prof;
}

std::optional<int> tent_epsilon(const TentMap& f, int period_cap) {
  auto prof = postcritical_profile(f, period_cap);
  if (prof.kind != PostcriticalProfile::Kind::PeriodicC || prof.numeric)
    return std::nullopt;
  // count points f^r(c), 1 <= r < n, in (c, b]
  int count = 0;
  Real v = f.b;
  for (int r = 1; r < prof.period; ++r) {
    if (classify_side(v, f.p) == SideClass::Right) ++count;
    v = tent_eval(f, v);
  }
  return count & 1;
}

namespace {

// Itinerary continuation after an exact hit of c: sides of b, a, f(a), ...
void append_critical_tail(const TentMap& f, std::vector<uint8_t>& w, int upto) {
  Real v = f.b;
  while (static_cast<int>(w.size()) < upto) {
    SideClass side = classify_side(v, f.p);
    if (side == SideClass::AtC) {
      // c periodic would have been handled by the epsilon convention; treat
      // defensively as right (the b side), consistent with f(c) = b.
      w.push_back(1);
    } else {
      w.push_back(side == SideClass::Right ? 1 : 0);
    }
    v = tent_eval(f, v);
  }
}

}  // namespace

Word itinerary(const TentMap& f, const Real& x, int n) {
  Word w;
  w.s.reserve(n);
  Real v = x;
  std::optional<int> eps;  // computed lazily on first exact c hit
  bool eps_known = false;
  for (int r = 0; r < n; ++r) {
    SideClass side = classify_side(v, f.p);
    if (side == SideClass::Uncertain)
      throw PrecisionExhausted("itinerary: side of c undecided at cap");
    if (side == SideClass::AtC) {
      if (!eps_known) {
        eps = tent_epsilon(f);
        eps_known = true;
      }
      if (eps) {
        w.s.push_back(static_cast<uint8_t>(*eps));
        v = f.b;  // f(c) = b
        continue;
      }
      // c not (provably) periodic: word ends at the common prefix
      w.ambiguous_tail = true;
      return w;
    }
    w.s.push_back(side == SideClass::Right ? 1 : 0);
    v = tent_eval(f, v);
  }
  return w;
}

std::pair<Word, Word> itinerary_both(const TentMap& f, const Real& x, int n) {
  Word prefix = itinerary(f, x, n);
  if (!prefix.ambiguous_tail) return {prefix, prefix};
  Word w0 = prefix, w1 = prefix;
  w0.ambiguous_tail = w1.ambiguous_tail = false;
  w0.s.push_back(0);
  w1.s.push_back(1);
  append_critical_tail(f, w0.s, n);
  append_critical_tail(f, w1.s, n);
  return {w0, w1};
}

Word kneading(const TentMap& f, int n) { return itinerary(f, f.b, n); }

}  // namespace tentlab
