#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "tentlab/interval.hpp"
#include "tentlab/poly.hpp"

namespace tentlab {

struct PrecisionExhausted : std::runtime_error {
  explicit PrecisionExhausted(const std::string& what)
      : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

enum class Sign { Negative, Zero, Positive };

// ---------------------------------------------------------------------------
// Q(lambda): the field generated by a single algebraic lambda, represented by
// an integer-coefficient minimal polynomial and an isolating interval.
// ---------------------------------------------------------------------------

class NumberField {
 public:
  // minpoly must have exactly one real root in (iso_lo, iso_hi).
  NumberField(Poly minpoly, mpq_class iso_lo, mpq_class iso_hi);

  int degree() const { return deg_; }
  const Poly& minpoly() const { return minpoly_; }

  // Sign of e(lambda) for a nonzero reduced element polynomial e.
  int element_sign(const Poly& e) const;

  // Interval enclosure of lambda at the given working precision.
  Ival enclosure(mpfr_prec_t prec) const;

  // Reduction of lambda^k for k in [degree, 2*degree-2] as element vectors.
  const std::vector<std::vector<mpq_class>>& reduction_rows() const {
    return red_;
  }

 private:
  void refine_to_bits(long bits) const;  // shrink bracket to width <= 2^-bits

  Poly minpoly_;
  int deg_;
  std::vector<std::vector<mpq_class>> red_;
  mutable std::mutex mu_;
  mutable mpq_class lo_, hi_;
  mutable long bracket_bits_ = 0;
  mutable std::map<mpfr_prec_t, Ival> enc_;
};

// Element of Q(lambda), reduced: coefficient vector of length degree.
struct QLambda {
  std::shared_ptr<const NumberField> field;
  std::vector<mpq_class> c;

  bool is_zero() const;
  bool is_rational() const;  // all higher coefficients zero
};

QLambda ql_from_mpq(const std::shared_ptr<const NumberField>& F,
                    const mpq_class& q);
QLambda ql_lambda(const std::shared_ptr<const NumberField>& F);
QLambda ql_add(const QLambda& a, const QLambda& b);
QLambda ql_sub(const QLambda& a, const QLambda& b);
QLambda ql_neg(QLambda a);
QLambda ql_mul(const QLambda& a, const QLambda& b);
QLambda ql_inv(const QLambda& a);
QLambda ql_div(const QLambda& a, const QLambda& b);
int ql_sign(const QLambda& a);
Ival ql_enclose(const QLambda& a, mpfr_prec_t prec);

// ---------------------------------------------------------------------------
// Lazy computable real: an expression DAG whose nodes evaluate to outward
// rounded intervals at any requested precision. Small exact rationals are
// constant-folded; everything else is re-evaluated on demand, so escalating
// the precision genuinely tightens the enclosure.
// ---------------------------------------------------------------------------

class Lazy;
using LazyPtr = std::shared_ptr<const Lazy>;

class Lazy {
 public:
  enum class Op { Leaf, Add, Sub, Mul, Div, Neg };

  static LazyPtr leaf(mpq_class q);
  static LazyPtr make(Op op, LazyPtr a, LazyPtr b);

  Op op() const { return op_; }
  const LazyPtr& left() const { return a_; }
  const LazyPtr& right() const { return b_; }
  const std::optional<mpq_class>& exact() const { return exact_; }

  // Evaluates the DAG iteratively (no deep recursion) at the given precision.
  // Throws PrecisionExhausted if a divisor cannot be bounded away from zero
  // at the precision cap.
  static Ival eval(const LazyPtr& node, mpfr_prec_t prec, mpfr_prec_t cap);

 private:
  Lazy() = default;
  Op op_ = Op::Leaf;
  LazyPtr a_, b_;
  std::optional<mpq_class> exact_;
  mutable std::mutex mu_;
  mutable std::map<mpfr_prec_t, Ival> cache_;
  friend struct LazyEval;
};

// ---------------------------------------------------------------------------
// Real: backend-generic number. All dynamics code is written against this.
// ---------------------------------------------------------------------------

class Real {
 public:
  Real() : v_(Lazy::leaf(mpq_class(0))) {}
  explicit Real(QLambda q) : v_(std::move(q)) {}
  explicit Real(LazyPtr l) : v_(std::move(l)) {}

  bool exact_backend() const { return std::holds_alternative<QLambda>(v_); }
  const QLambda& ql() const { return std::get<QLambda>(v_); }
  const LazyPtr& lazy() const { return std::get<LazyPtr>(v_); }

  // Exact rational value when the backend knows one.
  std::optional<mpq_class> exact_rational() const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator-(const Real& a);

  Ival enclose(mpfr_prec_t prec, mpfr_prec_t cap = 0) const;
  double approx() const;  // point estimate for plotting/reporting

 private:
  std::variant<QLambda, LazyPtr> v_;
};

struct PrecPolicy {
  mpfr_prec_t def = 256;
  mpfr_prec_t cap = 4096;
};

// Sign of x, escalating interval precision up to the cap; nullopt when the
// backend cannot decide (interval straddles zero at cap).
std::optional<Sign> try_sign(const Real& x, const PrecPolicy& pp = {});
Sign sign_or_throw(const Real& x, const PrecPolicy& pp = {});

// Three-way comparison helpers built on try_sign(a - b).
std::optional<int> try_cmp(const Real& a, const Real& b,
                           const PrecPolicy& pp = {});
int cmp_or_throw(const Real& a, const Real& b, const PrecPolicy& pp = {});
bool lt(const Real& a, const Real& b, const PrecPolicy& pp = {});
bool leq(const Real& a, const Real& b, const PrecPolicy& pp = {});
bool eq(const Real& a, const Real& b, const PrecPolicy& pp = {});

// True width-<= test against a rational bound (exact, no double rounding).
bool width_leq(const Ival& v, const mpq_class& w);

// Returns the same real, with its enclosure tightened to width <= target.
// Exact backends are returned as-is (width 0).
Real escalate(const Real& x, const mpq_class& target_width,
              const PrecPolicy& pp = {});

double real_width(const Real& x, const PrecPolicy& pp = {});

}  // namespace tentlab
