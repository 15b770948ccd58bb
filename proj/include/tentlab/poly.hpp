#pragma once

#include <gmpxx.h>
#include <optional>
#include <string>
#include <vector>

namespace tentlab {

// Dense univariate polynomial over the rationals, coefficients constant-first.
// Zero polynomial is the empty vector; nonzero polynomials keep a nonzero
// leading coefficient.
using Poly = std::vector<mpq_class>;

Poly poly_trim(Poly p);
int poly_deg(const Poly& p);  // -1 for the zero polynomial
bool poly_is_zero(const Poly& p);

Poly poly_add(const Poly& p, const Poly& q);
Poly poly_sub(const Poly& p, const Poly& q);
Poly poly_neg(Poly p);
Poly poly_mul(const Poly& p, const Poly& q);
Poly poly_scale(Poly p, const mpq_class& s);
Poly poly_derivative(const Poly& p);

// Euclidean division: p = q*d + r with deg r < deg d. d must be nonzero.
void poly_divrem(const Poly& p, const Poly& d, Poly& q, Poly& r);

mpq_class poly_eval(const Poly& p, const mpq_class& x);

// Sign of p at x: -1, 0, +1.
int poly_sign_at(const Poly& p, const mpq_class& x);

// Number of distinct real roots in (lo, hi], by Sturm's theorem.
int poly_count_roots(const Poly& p, const mpq_class& lo, const mpq_class& hi);

// Shrinks [lo, hi], known to isolate a single simple root, to width <= w by
// bisection. Signs at the endpoints must differ.
void poly_refine_root(const Poly& p, mpq_class& lo, mpq_class& hi,
                      const mpq_class& w);

// Parses "c0,c1,...,cn" (constant first) into a polynomial. Coefficients may
// be integers or fractions like "-3/2".
Poly poly_parse(const std::string& s);

}  // namespace tentlab
