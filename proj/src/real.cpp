#include "tentlab/real.hpp"

#include <algorithm>
#include <cmath>

namespace tentlab {

// ------------------------------- NumberField -------------------------------

NumberField::NumberField(Poly minpoly, mpq_class iso_lo, mpq_class iso_hi)
    : minpoly_(poly_trim(std::move(minpoly))), lo_(iso_lo), hi_(iso_hi) {
  deg_ = poly_deg(minpoly_);
  if (deg_ < 1) throw std::invalid_argument("minimal polynomial is constant");
  if (!(lo_ < hi_)) throw std::invalid_argument("empty isolating interval");
  int nroots = poly_count_roots(minpoly_, lo_, hi_);
  if (nroots != 1)
    throw std::invalid_argument("isolating interval contains " +
                                std::to_string(nroots) + " roots, expected 1");
  // If an endpoint is itself a root, nudge it inward.
  while (poly_sign_at(minpoly_, lo_) == 0) lo_ += (hi_ - lo_) / 1024;
  while (poly_sign_at(minpoly_, hi_) == 0) hi_ -= (hi_ - lo_) / 1024;
  if (poly_sign_at(minpoly_, lo_) == poly_sign_at(minpoly_, hi_))
    throw std::invalid_argument("isolating interval does not bracket the root");

  // lambda^k mod minpoly for k = deg .. 2*deg-2, used by multiplication.
  const mpq_class lead = minpoly_.back();
  std::vector<mpq_class> cur(deg_);  // lambda^deg reduced
  for (int i = 0; i < deg_; ++i) cur[i] = -minpoly_[i] / lead;
  red_.push_back(cur);
  for (int k = deg_ + 1; k <= 2 * deg_ - 2; ++k) {
    std::vector<mpq_class> nxt(deg_, mpq_class(0));
    // multiply cur by lambda, reduce the overflow term
    mpq_class top = cur[deg_ - 1];
    for (int i = deg_ - 1; i > 0; --i) nxt[i] = cur[i - 1];
    nxt[0] = 0;
    for (int i = 0; i < deg_; ++i) nxt[i] += top * red_[0][i];
    red_.push_back(nxt);
    cur = std::move(nxt);
  }
  refine_to_bits(64);
}

void NumberField::refine_to_bits(long bits) const {
  // caller holds mu_ or is the constructor
  if (bracket_bits_ >= bits) return;
  mpq_class w(1);
  w >>= static_cast<unsigned long>(bits);
  poly_refine_root(minpoly_, lo_, hi_, w);
  bracket_bits_ = bits;
}

Ival NumberField::enclosure(mpfr_prec_t prec) const {
  std::lock_guard<std::mutex> g(mu_);
  auto it = enc_.find(prec);
  if (it != enc_.end()) return it->second;
  refine_to_bits(static_cast<long>(prec) + 4);
  Ival out = Ival::from_mpq_pair(lo_, hi_, prec);
  enc_.emplace(prec, out);
  return out;
}

namespace {

// Exact interval Horner evaluation of e over rational [lo, hi].
void rational_interval_eval(const Poly& e, const mpq_class& lo,
                            const mpq_class& hi, mpq_class& out_lo,
                            mpq_class& out_hi) {
  out_lo = 0;
  out_hi = 0;
  for (size_t i = e.size(); i-- > 0;) {
    // [out] * [lo,hi] + e[i]
    mpq_class p1 = out_lo * lo, p2 = out_lo * hi, p3 = out_hi * lo,
              p4 = out_hi * hi;
    mpq_class nlo = std::min(std::min(p1, p2), std::min(p3, p4));
    mpq_class nhi = std::max(std::max(p1, p2), std::max(p3, p4));
    out_lo = nlo + e[i];
    out_hi = nhi + e[i];
  }
}

Ival horner_ival(const Poly& e, const Ival& x, mpfr_prec_t prec) {
  Ival acc = Ival::from_long(0, prec);
  for (size_t i = e.size(); i-- > 0;) {
    acc = Ival::mul(acc, x, prec);
    acc = Ival::add(acc, Ival::from_mpq(e[i], prec), prec);
  }
  return acc;
}

}  // namespace

int NumberField::element_sign(const Poly& e) const {
  if (poly_is_zero(e)) return 0;
  if (poly_deg(e) == 0) return sgn(e[0]);
  // Fast path: float enclosures at a few precisions.
  for (mpfr_prec_t p : {static_cast<mpfr_prec_t>(320),
                        static_cast<mpfr_prec_t>(1024)}) {
    Ival v = horner_ival(e, enclosure(p), p);
    int s = v.sign();
    if (s != 0 || v.is_exact_zero()) return s;
  }
  // Slow path: exact rational bracket refinement. A nonzero element of the
  // field cannot vanish at lambda, so this terminates for sane inputs.
  std::lock_guard<std::mutex> g(mu_);
  long bits = std::max(bracket_bits_, 2048L);
  const long kBitCap = 1L << 20;
  while (bits <= kBitCap) {
    refine_to_bits(bits);
    mpq_class vlo, vhi;
    rational_interval_eval(e, lo_, hi_, vlo, vhi);
    if (sgn(vlo) > 0) return 1;
    if (sgn(vhi) < 0) return -1;
    if (vlo == 0 && vhi == 0) return 0;
    bits *= 2;
  }
  throw PrecisionExhausted("element_sign: undecided at bracket cap");
}

// -------------------------------- QLambda ---------------------------------

bool QLambda::is_zero() const {
  for (const auto& x : c)
    if (x != 0) return false;
  return true;
}

bool QLambda::is_rational() const {
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i] != 0) return false;
  return true;
}

QLambda ql_from_mpq(const std::shared_ptr<const NumberField>& F,
                    const mpq_class& q) {
  QLambda r{F, std::vector<mpq_class>(F->degree(), mpq_class(0))};
  r.c[0] = q;
  return r;
}

QLambda ql_lambda(const std::shared_ptr<const NumberField>& F) {
  QLambda r{F, std::vector<mpq_class>(F->degree(), mpq_class(0))};
  if (F->degree() == 1) {
    // lambda is rational: -c0/c1 of the minimal polynomial
    r.c[0] = -F->minpoly()[0] / F->minpoly()[1];
  } else {
    r.c[1] = 1;
  }
  return r;
}

static void check_same_field(const QLambda& a, const QLambda& b) {
  if (a.field != b.field)
    throw std::logic_error("mixing elements of different number fields");
}

QLambda ql_add(const QLambda& a, const QLambda& b) {
  check_same_field(a, b);
  QLambda r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

QLambda ql_sub(const QLambda& a, const QLambda& b) {
  check_same_field(a, b);
  QLambda r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
  return r;
}

QLambda ql_neg(QLambda a) {
  for (auto& x : a.c) x = -x;
  return a;
}

QLambda ql_mul(const QLambda& a, const QLambda& b) {
  check_same_field(a, b);
  const int d = a.field->degree();
  std::vector<mpq_class> conv(2 * d - 1, mpq_class(0));
  for (int i = 0; i < d; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (b.c[j] == 0) continue;
      conv[i + j] += a.c[i] * b.c[j];
    }
  }
  QLambda r{a.field, std::vector<mpq_class>(d, mpq_class(0))};
  for (int i = 0; i < d; ++i) r.c[i] = conv[i];
  const auto& red = a.field->reduction_rows();
  for (int k = d; k <= 2 * d - 2; ++k) {
    if (conv[k] == 0) continue;
    const auto& row = red[k - d];
    for (int i = 0; i < d; ++i) r.c[i] += conv[k] * row[i];
  }
  return r;
}

QLambda ql_inv(const QLambda& a) {
  if (a.is_zero()) throw DomainError("inverse of zero field element");
  const int d = a.field->degree();
  if (d == 1 || a.is_rational()) {
    QLambda r = ql_from_mpq(a.field, 1 / a.c[0]);
    return r;
  }
  // extended Euclid in Q[x] against the minimal polynomial
  Poly r0 = a.field->minpoly();
  Poly r1(a.c.begin(), a.c.end());
  r1 = poly_trim(std::move(r1));
  Poly s0 = {}, s1 = {mpq_class(1)};  // coefficients of the element argument
  while (poly_deg(r1) > 0) {
    Poly q, rem;
    poly_divrem(r0, r1, q, rem);
    Poly s2 = poly_sub(s0, poly_mul(q, s1));
    r0 = std::move(r1);
    r1 = poly_trim(std::move(rem));
    s0 = std::move(s1);
    s1 = std::move(s2);
    if (poly_is_zero(r1))
      throw std::logic_error("minimal polynomial is not irreducible over Q");
  }
  // r1 is a nonzero constant: a * s1 = r1 (mod minpoly)
  Poly inv = poly_scale(std::move(s1), 1 / r1[0]);
  QLambda out{a.field, std::vector<mpq_class>(d, mpq_class(0))};
  for (int i = 0; i < static_cast<int>(inv.size()) && i < d; ++i)
    out.c[i] = inv[i];
  if (static_cast<int>(inv.size()) > d) {
    // reduce (can only happen transiently; keep it correct anyway)
    QLambda acc = ql_from_mpq(a.field, 0);
    QLambda pw = ql_from_mpq(a.field, 1);
    QLambda lam = ql_lambda(a.field);
    for (size_t i = 0; i < inv.size(); ++i) {
      QLambda term = pw;
      for (auto& x : term.c) x *= inv[i];
      acc = ql_add(acc, term);
      pw = ql_mul(pw, lam);
    }
    out = acc;
  }
  return out;
}

QLambda ql_div(const QLambda& a, const QLambda& b) {
  return ql_mul(a, ql_inv(b));
}

int ql_sign(const QLambda& a) {
  if (a.is_zero()) return 0;
  if (a.is_rational()) return sgn(a.c[0]);
  Poly e(a.c.begin(), a.c.end());
  return a.field->element_sign(poly_trim(std::move(e)));
}

Ival ql_enclose(const QLambda& a, mpfr_prec_t prec) {
  Poly e(a.c.begin(), a.c.end());
  e = poly_trim(std::move(e));
  if (e.empty()) return Ival::from_long(0, prec);
  return horner_ival(e, a.field->enclosure(prec), prec);
}

// ---------------------------------- Lazy -----------------------------------

namespace {
// Exact constant folding is capped so that long orbit computations degrade
// gracefully into interval arithmetic instead of unbounded rationals.
constexpr size_t kFoldBits = 4096;

size_t mpq_bits(const mpq_class& q) {
  return std::max(mpz_sizeinbase(q.get_num().get_mpz_t(), 2),
                  mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
}
}  // namespace

LazyPtr Lazy::leaf(mpq_class q) {
  auto n = std::shared_ptr<Lazy>(new Lazy());
  n->op_ = Op::Leaf;
  n->exact_ = std::move(q);
  return n;
}

LazyPtr Lazy::make(Op op, LazyPtr a, LazyPtr b) {
  if (op == Op::Neg) {
    if (a->exact_) return leaf(-*a->exact_);
  } else if (a->exact_ && b && b->exact_) {
    const mpq_class& x = *a->exact_;
    const mpq_class& y = *b->exact_;
    mpq_class r;
    bool ok = true;
    switch (op) {
      case Op::Add: r = x + y; break;
      case Op::Sub: r = x - y; break;
      case Op::Mul: r = x * y; break;
      case Op::Div:
        if (y == 0) throw DomainError("division by exact zero");
        r = x / y;
        break;
      default: ok = false; break;
    }
    if (ok && mpq_bits(r) <= kFoldBits) return leaf(std::move(r));
  }
  auto n = std::shared_ptr<Lazy>(new Lazy());
  n->op_ = op;
  n->a_ = std::move(a);
  n->b_ = std::move(b);
  return n;
}

struct LazyEval {
  static std::optional<Ival> cached(const Lazy* n, mpfr_prec_t prec) {
    std::lock_guard<std::mutex> g(n->mu_);
    auto it = n->cache_.find(prec);
    if (it == n->cache_.end()) return std::nullopt;
    return it->second;
  }
  static void store(const Lazy* n, mpfr_prec_t prec, const Ival& v) {
    std::lock_guard<std::mutex> g(n->mu_);
    n->cache_.emplace(prec, v);
  }
};

Ival Lazy::eval(const LazyPtr& root, mpfr_prec_t prec, mpfr_prec_t cap) {
  if (cap == 0) cap = prec;
  // Iterative post-order evaluation; nodes are revisited once their children
  // have cached results at this precision.
  struct Frame {
    const Lazy* n;
    bool expanded;
  };
  std::vector<Frame> stack;
  stack.push_back({root.get(), false});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const Lazy* n = f.n;
    if (LazyEval::cached(n, prec)) continue;
    if (n->op_ == Op::Leaf) {
      LazyEval::store(n, prec, Ival::from_mpq(*n->exact_, prec));
      continue;
    }
    if (n->exact_) {
      LazyEval::store(n, prec, Ival::from_mpq(*n->exact_, prec));
      continue;
    }
    if (!f.expanded) {
      stack.push_back({n, true});
      if (n->a_ && !LazyEval::cached(n->a_.get(), prec))
        stack.push_back({n->a_.get(), false});
      if (n->b_ && !LazyEval::cached(n->b_.get(), prec))
        stack.push_back({n->b_.get(), false});
      continue;
    }
    Ival va = *LazyEval::cached(n->a_.get(), prec);
    Ival r(prec);
    switch (n->op_) {
      case Op::Neg:
        r = Ival::neg(va, prec);
        break;
      case Op::Add:
        r = Ival::add(va, *LazyEval::cached(n->b_.get(), prec), prec);
        break;
      case Op::Sub:
        r = Ival::sub(va, *LazyEval::cached(n->b_.get(), prec), prec);
        break;
      case Op::Mul:
        r = Ival::mul(va, *LazyEval::cached(n->b_.get(), prec), prec);
        break;
      case Op::Div: {
        Ival vb = *LazyEval::cached(n->b_.get(), prec);
        if (vb.contains_zero()) {
          if (prec >= cap)
            throw PrecisionExhausted(
                "divisor interval straddles zero at precision cap");
          // Re-run the whole evaluation at doubled precision.
          return eval(root, std::min<mpfr_prec_t>(prec * 2, cap), cap);
        }
        r = Ival::div(va, vb, prec);
        break;
      }
      default:
        throw std::logic_error("unreachable op");
    }
    LazyEval::store(n, prec, r);
  }
  return *LazyEval::cached(root.get(), prec);
}

// ---------------------------------- Real -----------------------------------

std::optional<mpq_class> Real::exact_rational() const {
  if (exact_backend()) {
    if (ql().is_rational()) return ql().c[0];
    return std::nullopt;
  }
  if (lazy()->exact()) return *lazy()->exact();
  return std::nullopt;
}

static Real binop(Lazy::Op op, const Real& a, const Real& b) {
  if (a.exact_backend() != b.exact_backend())
    throw std::logic_error("mixing exact and interval backends");
  if (a.exact_backend()) {
    switch (op) {
      case Lazy::Op::Add: return Real(ql_add(a.ql(), b.ql()));
      case Lazy::Op::Sub: return Real(ql_sub(a.ql(), b.ql()));
      case Lazy::Op::Mul: return Real(ql_mul(a.ql(), b.ql()));
      case Lazy::Op::Div: return Real(ql_div(a.ql(), b.ql()));
      default: break;
    }
    throw std::logic_error("unreachable");
  }
  return Real(Lazy::make(op, a.lazy(), b.lazy()));
}

Real operator+(const Real& a, const Real& b) {
  return binop(Lazy::Op::Add, a, b);
}
Real operator-(const Real& a, const Real& b) {
  return binop(Lazy::Op::Sub, a, b);
}
Real operator*(const Real& a, const Real& b) {
  return binop(Lazy::Op::Mul, a, b);
}
Real operator/(const Real& a, const Real& b) {
  return binop(Lazy::Op::Div, a, b);
}
Real operator-(const Real& a) {
  if (a.exact_backend()) return Real(ql_neg(a.ql()));
  return Real(Lazy::make(Lazy::Op::Neg, a.lazy(), nullptr));
}

Ival Real::enclose(mpfr_prec_t prec, mpfr_prec_t cap) const {
  if (exact_backend()) return ql_enclose(ql(), prec);
  return Lazy::eval(lazy(), prec, cap == 0 ? prec : cap);
}

double Real::approx() const { return enclose(128).mid_double(); }

std::optional<Sign> try_sign(const Real& x, const PrecPolicy& pp) {
  if (x.exact_backend()) {
    int s = ql_sign(x.ql());
    return s < 0 ? Sign::Negative : (s > 0 ? Sign::Positive : Sign::Zero);
  }
  if (x.lazy()->exact()) {
    int s = sgn(*x.lazy()->exact());
    return s < 0 ? Sign::Negative : (s > 0 ? Sign::Positive : Sign::Zero);
  }
  for (mpfr_prec_t p = pp.def; p <= pp.cap; p *= 2) {
    Ival v = Lazy::eval(x.lazy(), p, pp.cap);
    if (v.is_exact_zero()) return Sign::Zero;
    int s = v.sign();
    if (s < 0) return Sign::Negative;
    if (s > 0) return Sign::Positive;
  }
  return std::nullopt;
}

Sign sign_or_throw(const Real& x, const PrecPolicy& pp) {
  auto s = try_sign(x, pp);
  if (!s) throw PrecisionExhausted("sign undecided at precision cap");
  return *s;
}

std::optional<int> try_cmp(const Real& a, const Real& b, const PrecPolicy& pp) {
  auto s = try_sign(a - b, pp);
  if (!s) return std::nullopt;
  return *s == Sign::Negative ? -1 : (*s == Sign::Positive ? 1 : 0);
}

int cmp_or_throw(const Real& a, const Real& b, const PrecPolicy& pp) {
  auto c = try_cmp(a, b, pp);
  if (!c) throw PrecisionExhausted("comparison undecided at precision cap");
  return *c;
}

bool lt(const Real& a, const Real& b, const PrecPolicy& pp) {
  return cmp_or_throw(a, b, pp) < 0;
}
bool leq(const Real& a, const Real& b, const PrecPolicy& pp) {
  return cmp_or_throw(a, b, pp) <= 0;
}
bool eq(const Real& a, const Real& b, const PrecPolicy& pp) {
  return cmp_or_throw(a, b, pp) == 0;
}

bool width_leq(const Ival& v, const mpq_class& w) {
  mpfr_t d;
  mpfr_init2(d, std::max<mpfr_prec_t>(v.prec(), 64));
  mpfr_sub(d, v.hi(), v.lo(), MPFR_RNDU);
  int c = mpfr_cmp_q(d, w.get_mpq_t());
  mpfr_clear(d);
  return c <= 0;
}

Real escalate(const Real& x, const mpq_class& target_width,
              const PrecPolicy& pp) {
  if (target_width <= 0)
    throw std::invalid_argument("escalate: target width must be positive");
  if (x.exact_backend()) return x;
  if (x.lazy()->exact()) return x;
  for (mpfr_prec_t p = pp.def; p <= pp.cap; p *= 2) {
    Ival v = Lazy::eval(x.lazy(), p, pp.cap);
    if (width_leq(v, target_width)) return x;
  }
  throw PrecisionExhausted("escalate: width target unreachable at cap");
}

double real_width(const Real& x, const PrecPolicy& pp) {
  if (x.exact_backend()) return 0.0;
  if (x.lazy()->exact()) return 0.0;
  return Lazy::eval(x.lazy(), pp.def, pp.cap).width();
}

}  // namespace tentlab
