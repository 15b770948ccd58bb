#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tentlab/param.hpp"

namespace tentlab {

// Core tent map f: [a,b] -> [a,b], the restriction of x -> min(lx, l(1-x))
// to [f^2(c), f(c)] with turning point c = 1/2.
struct TentMap {
  Parameter p;
  Real lambda;
  Real a, b, c, a_hat;  // a = f^2(c), b = f(c) = l/2, a_hat = 1 - a
  Real p_fix;           // fixed point l/(1+l)

  static TentMap make(const Parameter& p);
};

Real tent_eval(const TentMap& f, const Real& x);
Real tent_hat(const TentMap& f, const Real& x);  // the mirror point 1 - x

struct Preimage {
  Real x;
  int branch;  // 0: left of c, 1: right of c
};

// Preimages of y under f within the core interval. The right preimage
// 1 - y/l always exists; the left preimage y/l exists iff y >= f(a).
// At y = b the two coincide at c and a single entry is returned.
std::vector<Preimage> tent_preimages(const TentMap& f, const Real& y);

// 0/1 word with a flag marking that the orbit hit c exactly while c is not
// (provably) periodic, so the word is the common prefix of two itineraries.
struct Word {
  std::vector<uint8_t> s;
  bool ambiguous_tail = false;

  size_t size() const { return s.size(); }
  std::string str() const;
};

enum class UniCmp { Less, EqualAtDepth, Greater };

// Parity-lexicographic (unimodal) order. Less means s precedes t.
UniCmp unimodal_cmp(const Word& s, const Word& t);
UniCmp unimodal_cmp(const std::vector<uint8_t>& s,
                    const std::vector<uint8_t>& t);

// epsilon(f): defined when c is periodic; parity of the count of points
// f^r(c), 1 <= r < n, lying in (c, b].
std::optional<int> tent_epsilon(const TentMap& f, int period_cap = 512);

Word itinerary(const TentMap& f, const Real& x, int n);

// Both continuations at an exact c hit with non-periodic c.
std::pair<Word, Word> itinerary_both(const TentMap& f, const Real& x, int n);

// Kneading sequence: the itinerary of b.
Word kneading(const TentMap& f, int n);

struct PostcriticalProfile {
  enum class Kind { PeriodicC, PreperiodicC, InfiniteWithinCap };
  Kind kind = Kind::InfiniteWithinCap;
  int period = 0;
  int preperiod = 0;  // index of the first periodic point (PreperiodicC)
  bool numeric = false;  // coincidence certified only to 2^-64
};

PostcriticalProfile postcritical_profile(const TentMap& f, int depth_cap);

// First depth_cap points of the postcritical orbit f(c), f^2(c), ...
std::vector<Real> postcritical_orbit(const TentMap& f, int depth_cap);

}  // namespace tentlab
