#include "tentlab/param.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace tentlab {

mpq_class mpq_from_decimal(const std::string& s) {
  std::string t;
  t.reserve(s.size());
  bool neg = false;
  size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  long frac_digits = -1;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == '.') {
      if (frac_digits >= 0) throw std::invalid_argument("bad decimal: " + s);
      frac_digits = 0;
      continue;
    }
    if (ch < '0' || ch > '9') throw std::invalid_argument("bad decimal: " + s);
    t.push_back(ch);
    if (frac_digits >= 0) ++frac_digits;
  }
  if (t.empty()) throw std::invalid_argument("bad decimal: " + s);
  mpz_class num(t, 10);
  mpz_class den(1);
  for (long k = 0; k < std::max(frac_digits, 0L); ++k) den *= 10;
  mpq_class q(num, den);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

Parameter Parameter::algebraic(Poly minpoly, const mpq_class& iso_lo,
                               const mpq_class& iso_hi, PrecPolicy pp) {
  Parameter p;
  p.field_ = std::make_shared<const NumberField>(std::move(minpoly), iso_lo,
                                                 iso_hi);
  p.lambda_ = Real(ql_lambda(p.field_));
  p.pp_ = pp;
  std::ostringstream os;
  os << "poly:";
  const Poly& mp = p.field_->minpoly();
  for (size_t i = 0; i < mp.size(); ++i) os << (i ? "," : "") << mp[i];
  os << ":interval:" << iso_lo << "," << iso_hi;
  p.spec_ = os.str();
  p.check_range();
  return p;
}

Parameter Parameter::decimal(const std::string& dec, PrecPolicy pp) {
  Parameter p;
  mpq_class q = mpq_from_decimal(dec);
  p.lambda_ = Real(Lazy::leaf(q));
  p.pp_ = pp;
  p.spec_ = "dec:" + dec;
  p.check_range();
  return p;
}

Parameter Parameter::decimal_mpq(const mpq_class& q, PrecPolicy pp) {
  Parameter p;
  p.lambda_ = Real(Lazy::leaf(q));
  p.pp_ = pp;
  std::ostringstream os;
  os << "ratio:" << q;
  p.spec_ = os.str();
  p.check_range();
  return p;
}

void Parameter::check_range() const {
  // sqrt(2) < lambda < 2  <=>  lambda^2 > 2 and lambda < 2
  Real lam = lambda_;
  Real two = real(2);
  if (sign_or_throw(lam * lam - two, pp_) != Sign::Positive ||
      sign_or_throw(lam - two, pp_) != Sign::Negative ||
      sign_or_throw(lam, pp_) != Sign::Positive)
    throw std::invalid_argument("lambda must lie in (sqrt(2), 2)");
}

Real Parameter::real(long v) const {
  return real(mpq_class(v));
}

Real Parameter::real(const mpq_class& q) const {
  if (exact()) return Real(ql_from_mpq(field_, q));
  return Real(Lazy::leaf(q));
}

namespace {

std::string strip_quotes(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

Parameter Parameter::parse(const std::string& spec, PrecPolicy pp) {
  if (spec.rfind("dec:", 0) == 0) {
    return decimal(strip_quotes(spec.substr(4)), pp);
  }
  if (spec.rfind("poly:", 0) == 0) {
    std::string rest = spec.substr(5);
    size_t k = rest.find(":interval:");
    if (k == std::string::npos)
      throw std::invalid_argument(
          "polynomial spec needs :interval:\"lo,hi\" part");
    std::string coeffs = strip_quotes(rest.substr(0, k));
    std::string iv = strip_quotes(rest.substr(k + 10));
    size_t comma = iv.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("interval needs two endpoints");
    mpq_class lo = mpq_from_decimal(iv.substr(0, comma));
    mpq_class hi = mpq_from_decimal(iv.substr(comma + 1));
    Parameter p = algebraic(poly_parse(coeffs), lo, hi, pp);
    p.spec_ = spec;
    return p;
  }
  // bare decimal as a convenience
  if (!spec.empty() && (std::isdigit(spec[0]) || spec[0] == '.')) {
    return decimal(spec, pp);
  }
  throw std::invalid_argument("unrecognized lambda spec: " + spec);
}

SideClass classify_side(const Real& x, const Parameter& p) {
  Real half = p.real(mpq_class(1, 2));
  auto s = try_sign(x - half, p.prec());
  if (!s) return SideClass::Uncertain;
  switch (*s) {
    case Sign::Negative: return SideClass::Left;
    case Sign::Positive: return SideClass::Right;
    case Sign::Zero: return SideClass::AtC;
  }
  return SideClass::Uncertain;
}

}  // namespace tentlab
