#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace tentlab {

// Closed interval [lo, hi] with mpfr endpoints, all operations outward
// rounded so the true real value is always contained.
class Ival {
 public:
  Ival() : Ival(64) {}
  explicit Ival(mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }
  Ival(const Ival& o) {
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  Ival(Ival&& o) noexcept {
    mpfr_init2(lo_, 2);
    mpfr_init2(hi_, 2);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }
  Ival& operator=(Ival o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
  }
  ~Ival() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  static Ival from_mpq(const mpq_class& q, mpfr_prec_t prec);
  static Ival from_mpq_pair(const mpq_class& lo, const mpq_class& hi,
                            mpfr_prec_t prec);
  static Ival from_long(long v, mpfr_prec_t prec);

  mpfr_prec_t prec() const { return mpfr_get_prec(lo_); }

  static Ival add(const Ival& a, const Ival& b, mpfr_prec_t prec);
  static Ival sub(const Ival& a, const Ival& b, mpfr_prec_t prec);
  static Ival mul(const Ival& a, const Ival& b, mpfr_prec_t prec);
  static Ival div(const Ival& a, const Ival& b, mpfr_prec_t prec);  // 0 not in b
  static Ival neg(const Ival& a, mpfr_prec_t prec);

  bool contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
  }
  // -1 / +1 when the sign is certain, 0 when the interval straddles zero
  // (or is exactly zero; callers distinguish via is_exact_zero).
  int sign() const {
    if (mpfr_sgn(hi_) < 0) return -1;
    if (mpfr_sgn(lo_) > 0) return 1;
    return 0;
  }
  bool is_exact_zero() const {
    return mpfr_zero_p(lo_) && mpfr_zero_p(hi_);
  }

  // Upper bound on hi - lo as a double (inf if huge).
  double width() const;

  double mid_double() const;
  double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

  const __mpfr_struct* lo() const { return lo_; }
  const __mpfr_struct* hi() const { return hi_; }

  std::string str(int digits = 20) const;

 private:
  mpfr_t lo_, hi_;
};

}  // namespace tentlab
