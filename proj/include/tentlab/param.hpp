#pragma once

#include <memory>
#include <string>

#include "tentlab/real.hpp"

namespace tentlab {

enum class SideClass { Left, Right, AtC, Uncertain };

// The slope lambda of the tent map, with its numeric backend. An algebraic
// spec (integer polynomial + isolating interval) selects exact Q(lambda)
// arithmetic; a decimal spec selects lazy interval arithmetic seeded from the
// exact rational value of the decimal string.
class Parameter {
 public:
  static Parameter algebraic(Poly minpoly, const mpq_class& iso_lo,
                             const mpq_class& iso_hi, PrecPolicy pp = {});
  static Parameter decimal(const std::string& dec, PrecPolicy pp = {});
  // Interval backend seeded from an exact rational (used for parameters too
  // close to a plateau boundary to write as a short decimal).
  static Parameter decimal_mpq(const mpq_class& q, PrecPolicy pp = {});

  // CLI grammar:
  //   poly:"1,-2,0,1":interval:"1.6,1.7"   (coefficients constant-first)
  //   dec:"1.8392867552141611"
  // Quotes are optional.
  static Parameter parse(const std::string& spec, PrecPolicy pp = {});

  bool exact() const { return field_ != nullptr; }
  const Real& lambda() const { return lambda_; }
  Real real(long v) const;
  Real real(const mpq_class& q) const;
  const PrecPolicy& prec() const { return pp_; }
  const std::string& spec_string() const { return spec_; }
  const std::shared_ptr<const NumberField>& field() const { return field_; }

 private:
  Parameter() = default;
  void check_range() const;  // sqrt(2) < lambda < 2, decided exactly

  std::shared_ptr<const NumberField> field_;  // null for the decimal backend
  Real lambda_;
  PrecPolicy pp_;
  std::string spec_;
};

// Side of x relative to the turning point c = 1/2. AtC only when the backend
// proves equality; Uncertain only when the interval backend straddles c at
// the precision cap.
SideClass classify_side(const Real& x, const Parameter& p);

// Parses a decimal string (possibly with sign and fraction part) to an exact
// rational.
mpq_class mpq_from_decimal(const std::string& s);

}  // namespace tentlab
