#include "tentlab/outside.hpp"

#include <cmath>

namespace tentlab {

namespace {

bool provably_equal(const Real& x, const Real& y, const Parameter& p) {
  if (p.exact()) {
    auto s = try_sign(x - y, p.prec());
    return s && *s == Sign::Zero;
  }
  auto rx = x.exact_rational();
  auto ry = y.exact_rational();
  return rx && ry && *rx == *ry;
}

}  // namespace

CirclePoint canonical(const TentMap& f, CirclePoint y) {
  if (y.copy == Copy::Upper &&
      (provably_equal(y.x, f.a, f.p) || provably_equal(y.x, f.b, f.p)))
    y.copy = Copy::Lower;
  return y;
}

Real circle_coord(const TentMap& f, const CirclePoint& y) {
  Real denom = (f.b - f.a) + (f.b - f.a);
  if (y.copy == Copy::Lower) return (y.x - f.a) / denom;
  return f.p.real(mpq_class(1, 2)) + (f.b - y.x) / denom;
}

bool in_gamma_interior(const TentMap& f, const CirclePoint& y) {
  if (y.copy == Copy::Lower) return false;
  const auto& pp = f.p.prec();
  auto s1 = try_sign(y.x - f.a, pp);
  auto s2 = try_sign(f.a_hat - y.x, pp);
  if (!s1 || !s2)
    throw PrecisionExhausted("gamma membership undecided at cap");
  return *s1 == Sign::Positive && *s2 == Sign::Positive;
}

bool in_gamma_closed(const TentMap& f, const CirclePoint& y) {
  const auto& pp = f.p.prec();
  if (y.copy == Copy::Lower) {
    auto s = try_sign(y.x - f.a, pp);
    if (!s) throw PrecisionExhausted("gamma membership undecided at cap");
    return *s == Sign::Zero;
  }
  auto s1 = try_sign(y.x - f.a, pp);
  auto s2 = try_sign(f.a_hat - y.x, pp);
  if (!s1 || !s2)
    throw PrecisionExhausted("gamma membership undecided at cap");
  return *s1 != Sign::Negative && *s2 != Sign::Negative;
}

CirclePoint B_tilde(const TentMap& f, const CirclePoint& y_in) {
  CirclePoint y = canonical(f, y_in);
  if (y.copy == Copy::Lower) {
    SideClass side = classify_side(y.x, f.p);
    switch (side) {
      case SideClass::Left:
        return canonical(f, {f.lambda * y.x, Copy::Lower});
      case SideClass::AtC:
        return {f.b, Copy::Lower};  // f(c)_l = f(c)_u = b
      case SideClass::Right:
        return canonical(f, {f.lambda * (f.p.real(1) - y.x), Copy::Upper});
      case SideClass::Uncertain:
        throw PrecisionExhausted("B_tilde: side of c undecided");
    }
    throw std::logic_error("unreachable");
  }
  // Upper copy: defined only past the plateau, x > a_hat.
  auto s = try_sign(y.x - f.a_hat, f.p.prec());
  if (!s) throw PrecisionExhausted("B_tilde: position vs a_hat undecided");
  if (*s != Sign::Positive)
    throw DomainError("B_tilde undefined on the plateau [a_hat_u, a)");
  return canonical(f, {f.lambda * (f.p.real(1) - y.x), Copy::Lower});
}

CirclePoint B_outside(const TentMap& f, const CirclePoint& y_in) {
  CirclePoint y = canonical(f, y_in);
  if (y.copy == Copy::Upper) {
    auto s = try_sign(y.x - f.a_hat, f.p.prec());
    if (!s) throw PrecisionExhausted("B: position vs a_hat undecided");
    if (*s != Sign::Positive) return {f.lambda * f.a, Copy::Lower};  // plateau
    return B_tilde(f, y);
  }
  if (provably_equal(y.x, f.a, f.p))
    return {f.lambda * f.a, Copy::Lower};  // B(a) = f(a)_l = B~(a)
  return B_tilde(f, y);
}

CirclePoint B_tilde_inverse(const TentMap& f, const CirclePoint& y_in) {
  CirclePoint y = canonical(f, y_in);
  Real one = f.p.real(1);
  if (y.copy == Copy::Upper)
    return canonical(f, {one - y.x / f.lambda, Copy::Lower});
  auto s = try_sign(y.x - f.lambda * f.a, f.p.prec());  // x vs f(a)
  if (!s) throw PrecisionExhausted("B_tilde_inverse: position vs f(a)");
  if (*s != Sign::Negative)
    return canonical(f, {y.x / f.lambda, Copy::Lower});
  return canonical(f, {one - y.x / f.lambda, Copy::Upper});
}

LiftPoint lift_step(const TentMap& f, const LiftPoint& y) {
  CirclePoint img = B_outside(f, y.base);
  Real t0 = circle_coord(f, y.base);
  Real t1 = circle_coord(f, img);
  long w = y.winding;
  auto c = try_cmp(t1, t0, f.p.prec());
  if (!c) throw PrecisionExhausted("lift_step: wrap undecided");
  if (*c <= 0) ++w;  // wrapped past a
  return {img, w};
}

std::vector<Real> extreme_element(const TentMap& f, const CirclePoint& y,
                                  int r) {
  std::vector<Real> coords;
  coords.reserve(r + 1);
  CirclePoint cur = canonical(f, y);
  coords.push_back(tau(cur));
  for (int i = 0; i < r; ++i) {
    cur = B_tilde_inverse(f, cur);
    coords.push_back(tau(cur));
  }
  return coords;
}

namespace {

// Distance-to-boundary classification of a first-return point in gamma.
// exact = decided by the backend; otherwise within endpoint_tol.
HeightType classify_return(const TentMap& f, const CirclePoint& y,
                           double endpoint_tol, bool& numeric, bool& exact) {
  const Parameter& p = f.p;
  exact = false;
  numeric = false;
  if (p.exact()) {
    exact = true;
    if (y.copy == Copy::Lower) return HeightType::EndpointMinus;  // y == a
    auto sa = try_sign(y.x - f.a, p.prec());
    auto sh = try_sign(f.a_hat - y.x, p.prec());
    auto sc = try_sign(y.x - f.c, p.prec());
    if (*sa == Sign::Zero) return HeightType::EndpointMinus;
    if (*sh == Sign::Zero) return HeightType::EndpointPlus;
    if (*sc == Sign::Zero) return HeightType::NBT;
    return HeightType::General;
  }
  // decimal backend: boundary hits only certifiable within tolerance
  auto near_tol = [&](const Real& target) {
    Ival d = (y.x - target).enclose(p.prec().def, p.prec().cap);
    return d.lo_double() > -endpoint_tol && d.hi_double() < endpoint_tol;
  };
  if (y.copy == Copy::Lower || provably_equal(y.x, f.a, p)) {
    // canonical landing on a itself
    return HeightType::EndpointMinus;
  }
  if (provably_equal(y.x, f.a_hat, p)) return HeightType::EndpointPlus;
  if (near_tol(f.a)) {
    numeric = true;
    return HeightType::EndpointMinus;
  }
  if (near_tol(f.a_hat)) {
    numeric = true;
    return HeightType::EndpointPlus;
  }
  if (near_tol(f.c)) {
    numeric = true;
    return HeightType::NBT;
  }
  return HeightType::General;
}

}  // namespace

HeightResult height(const TentMap& f, long max_iters, double endpoint_tol) {
  HeightResult res;
  res.bracket_lo = 0.0;
  res.bracket_hi = 0.5;
  const auto& pp = f.p.prec();
  CirclePoint y{f.a, Copy::Lower};
  Real t_prev = circle_coord(f, y);  // = 0
  double t_prev_d = 0.0;
  long wraps = 0;
  double displacement = 0.0;  // lift displacement from t(a) = 0
  for (long r = 1; r <= max_iters; ++r) {
    CirclePoint img = B_tilde(f, y);
    Real t_img = circle_coord(f, img);
    auto c = try_cmp(t_img, t_prev, pp);
    if (!c) throw PrecisionExhausted("height: wrap comparison undecided");
    bool wrap = *c <= 0;  // wrapped past a (t == 0 means landing on a)
    if (wrap) ++wraps;
    double t_img_d = t_img.approx();
    displacement += t_img_d - t_prev_d + (wrap ? 1.0 : 0.0);
    res.iters_used = r;
    // |displacement - r*rho| < 1 for degree-one monotone lifts
    res.bracket_lo = std::max(res.bracket_lo, (displacement - 1.0) / r);
    res.bracket_hi = std::min(res.bracket_hi, (displacement + 1.0) / r);
    if (in_gamma_closed(f, img)) {
      res.rational = true;
      res.n = r;
      bool numeric = false, exact_type = false;
      res.type = classify_return(f, img, endpoint_tol, numeric, exact_type);
      res.numeric = numeric;
      // Winding of the closed period-n orbit of B. A Lower-copy return is a
      // landing exactly on a, whose wrap was counted by the coordinate
      // comparison; an Upper-copy return closes through the plateau step
      // back to f(a)_l, which always wraps.
      res.m = wraps + (img.copy == Copy::Lower ? 0 : 1);
      return res;
    }
    y = img;
    t_prev = t_img;
    t_prev_d = t_img_d;
  }
  res.rational = false;
  return res;
}

std::pair<double, double> rotation_bracket(const TentMap& f, long iters) {
  const auto& pp = f.p.prec();
  CirclePoint y{f.a, Copy::Lower};
  Real t_prev = circle_coord(f, y);
  double t_prev_d = 0.0;
  double displacement = 0.0;
  double lo = 0.0, hi = 1.0;
  for (long r = 1; r <= iters; ++r) {
    CirclePoint img = B_outside(f, y);
    Real t_img = circle_coord(f, img);
    auto c = try_cmp(t_img, t_prev, pp);
    if (!c) throw PrecisionExhausted("rotation_bracket: wrap undecided");
    bool wrap = *c <= 0;
    double t_img_d = t_img.approx();
    displacement += t_img_d - t_prev_d + (wrap ? 1.0 : 0.0);
    lo = std::max(lo, (displacement - 1.0) / r);
    hi = std::min(hi, (displacement + 1.0) / r);
    y = img;
    t_prev = t_img;
    t_prev_d = t_img_d;
  }
  return {lo, hi};
}

Classification classify(const TentMap& f, long max_iters, int profile_cap) {
  Classification cl;
  cl.h = height(f, max_iters);
  cl.profile = postcritical_profile(f, profile_cap);
  using K = Classification::Kind;
  if (!cl.h.rational) {
    cl.kind = K::IrrationalOrUndecided;
    return cl;
  }
  switch (cl.h.type) {
    case HeightType::EndpointMinus: cl.kind = K::RationalEndpointMinus; break;
    case HeightType::EndpointPlus: cl.kind = K::RationalEndpointPlus; break;
    case HeightType::NBT: cl.kind = K::RationalNBT; break;
    case HeightType::General: cl.kind = K::RationalGeneral; break;
  }
  if (f.p.exact() && !cl.h.numeric && !cl.profile.numeric) {
    using PK = PostcriticalProfile::Kind;
    if (cl.kind == K::RationalEndpointMinus &&
        !(cl.profile.kind == PK::PeriodicC && cl.profile.period == cl.h.n))
      throw Inconsistent("endpoint-minus type requires a period-n critical orbit");
    if (cl.kind == K::RationalEndpointPlus &&
        !(cl.profile.kind == PK::PreperiodicC && cl.profile.period == cl.h.n))
      throw Inconsistent("endpoint-plus type requires a pre-periodic critical orbit");
    if (cl.kind == K::RationalNBT &&
        !(cl.profile.kind == PK::PeriodicC && cl.profile.period == cl.h.n + 2))
      throw Inconsistent("NBT type requires a period-(n+2) critical orbit");
  }
  return cl;
}

}  // namespace tentlab
