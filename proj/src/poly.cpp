#include "tentlab/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace tentlab {

Poly poly_trim(Poly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

int poly_deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

bool poly_is_zero(const Poly& p) { return p.empty(); }

Poly poly_add(const Poly& p, const Poly& q) {
  Poly r(std::max(p.size(), q.size()), mpq_class(0));
  for (size_t i = 0; i < p.size(); ++i) r[i] += p[i];
  for (size_t i = 0; i < q.size(); ++i) r[i] += q[i];
  return poly_trim(std::move(r));
}

Poly poly_sub(const Poly& p, const Poly& q) {
  Poly r(std::max(p.size(), q.size()), mpq_class(0));
  for (size_t i = 0; i < p.size(); ++i) r[i] += p[i];
  for (size_t i = 0; i < q.size(); ++i) r[i] -= q[i];
  return poly_trim(std::move(r));
}

Poly poly_neg(Poly p) {
  for (auto& c : p) c = -c;
  return p;
}

Poly poly_mul(const Poly& p, const Poly& q) {
  if (p.empty() || q.empty()) return {};
  Poly r(p.size() + q.size() - 1, mpq_class(0));
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return poly_trim(std::move(r));
}

Poly poly_scale(Poly p, const mpq_class& s) {
  if (s == 0) return {};
  for (auto& c : p) c *= s;
  return p;
}

Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly r(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * static_cast<long>(i);
  return poly_trim(std::move(r));
}

void poly_divrem(const Poly& p, const Poly& d, Poly& q, Poly& r) {
  if (poly_is_zero(d)) throw std::invalid_argument("poly_divrem: zero divisor");
  r = p;
  q.assign(p.size(), mpq_class(0));
  const int dd = poly_deg(d);
  const mpq_class lead = d.back();
  while (poly_deg(r) >= dd) {
    const int k = poly_deg(r) - dd;
    mpq_class f = r.back() / lead;
    q[k] = f;
    for (int i = 0; i <= dd; ++i) r[k + i] -= f * d[i];
    r = poly_trim(std::move(r));
    if (r.empty()) break;
  }
  q = poly_trim(std::move(q));
}

mpq_class poly_eval(const Poly& p, const mpq_class& x) {
  mpq_class acc(0);
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

int poly_sign_at(const Poly& p, const mpq_class& x) {
  return sgn(poly_eval(p, x));
}

namespace {

// Sturm chain of p (square-free part not required; counts distinct roots).
std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain;
  chain.push_back(p);
  chain.push_back(poly_derivative(p));
  while (!poly_is_zero(chain.back()) && poly_deg(chain.back()) > 0) {
    Poly q, r;
    poly_divrem(chain[chain.size() - 2], chain.back(), q, r);
    if (poly_is_zero(r)) break;
    chain.push_back(poly_neg(std::move(r)));
  }
  return chain;
}

int sign_changes(const std::vector<Poly>& chain, const mpq_class& x) {
  int changes = 0, prev = 0;
  for (const auto& f : chain) {
    int s = poly_sign_at(f, x);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace

int poly_count_roots(const Poly& p, const mpq_class& lo, const mpq_class& hi) {
  if (poly_is_zero(p)) throw std::invalid_argument("root count of zero poly");
  auto chain = sturm_chain(p);
  return sign_changes(chain, lo) - sign_changes(chain, hi);
}

void poly_refine_root(const Poly& p, mpq_class& lo, mpq_class& hi,
                      const mpq_class& w) {
  int slo = poly_sign_at(p, lo);
  int shi = poly_sign_at(p, hi);
  if (slo == 0 || shi == 0 || slo == shi)
    throw std::invalid_argument("poly_refine_root: endpoints must bracket");
  while (hi - lo > w) {
    mpq_class mid = (lo + hi) / 2;
    int sm = poly_sign_at(p, mid);
    if (sm == 0) {
      // Root hit exactly: collapse to a tiny bracket around it.
      mpq_class eps = (hi - lo) / 4;
      lo = mid - eps;
      hi = mid + eps;
      if (hi - lo <= w) break;
      continue;
    }
    if (sm == slo)
      lo = mid;
    else
      hi = mid;
  }
}

Poly poly_parse(const std::string& s) {
  Poly p;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t b = tok.find_first_not_of(" \t");
    size_t e = tok.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty coefficient");
    p.emplace_back(tok.substr(b, e - b + 1));
    p.back().canonicalize();
  }
  return poly_trim(std::move(p));
}

}  // namespace tentlab
