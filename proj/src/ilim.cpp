#include "tentlab/ilim.hpp"

#include <algorithm>
#include <cmath>

namespace tentlab {

Thread fhat(const TentMap& f, const Thread& t) {
  Thread r;
  r.coords.reserve(t.coords.size() + 1);
  r.coords.push_back(tent_eval(f, t.coords.front()));
  r.coords.insert(r.coords.end(), t.coords.begin(), t.coords.end());
  return r;
}

Thread fhat_inverse(const Thread& t) {
  if (t.depth() < 1)
    throw DomainError("fhat_inverse: depth-0 thread has no recorded preimage");
  Thread r;
  r.coords.assign(t.coords.begin() + 1, t.coords.end());
  return r;
}

Word thread_word(const TentMap& f, const Thread& t) {
  Word w;
  w.s.reserve(t.depth());
  for (int i = 1; i < static_cast<int>(t.coords.size()); ++i) {
    SideClass side = classify_side(t.coords[i], f.p);
    switch (side) {
      case SideClass::Left: w.s.push_back(0); break;
      case SideClass::Right: w.s.push_back(1); break;
      case SideClass::AtC:
        w.s.push_back(1);
        w.ambiguous_tail = true;
        break;
      case SideClass::Uncertain:
        throw PrecisionExhausted("thread_word: side undecided");
    }
  }
  return w;
}

namespace {

// Left branch (preimage in [a,c]) exists iff y >= f(a); y == b forces the
// single preimage c.
struct BranchInfo {
  bool left, right;
  bool at_b;  // both branches collapse onto c
};

BranchInfo branches_at(const TentMap& f, const Real& y) {
  const auto& pp = f.p.prec();
  auto sb = try_sign(f.b - y, pp);
  if (!sb) throw PrecisionExhausted("branches_at: position vs b undecided");
  if (*sb == Sign::Zero) return {true, true, true};
  auto sl = try_sign(y - f.lambda * f.a, pp);
  if (!sl) throw PrecisionExhausted("branches_at: position vs f(a) undecided");
  return {*sl != Sign::Negative, true, false};
}

Real left_pre(const TentMap& f, const Real& y) { return y / f.lambda; }
Real right_pre(const TentMap& f, const Real& y) {
  return f.p.real(1) - y / f.lambda;
}

// One greedy step of the extremal itinerary: pick the branch that makes the
// word largest (want_max) or smallest given the running parity.
uint8_t extreme_symbol(bool want_max, int parity, const BranchInfo& br) {
  if (br.at_b) return 1;  // unique preimage c, coded 1
  if (!br.left) return 1;
  // both available: parity even means symbol 1 is the larger continuation
  uint8_t larger = parity == 0 ? 1 : 0;
  return want_max ? larger : static_cast<uint8_t>(1 - larger);
}

std::pair<Word, Thread> extreme_word(const TentMap& f, const Real& x, int r,
                                     bool want_max) {
  Word w;
  Thread t;
  t.coords.push_back(x);
  int parity = 0;
  Real cur = x;
  for (int i = 0; i < r; ++i) {
    BranchInfo br = branches_at(f, cur);
    uint8_t s = extreme_symbol(want_max, parity, br);
    if (br.at_b) w.ambiguous_tail = true;
    cur = s == 0 && !br.at_b ? left_pre(f, cur) : right_pre(f, cur);
    w.s.push_back(s);
    t.coords.push_back(cur);
    parity = (parity + s) & 1;
  }
  return {w, t};
}

}  // namespace

std::pair<Word, Thread> extreme_word_upper(const TentMap& f, const Real& x,
                                           int r) {
  return extreme_word(f, x, r, true);
}

std::pair<Word, Thread> extreme_word_lower(const TentMap& f, const Real& x,
                                           int r) {
  return extreme_word(f, x, r, false);
}

FiberApprox fiber(const TentMap& f, const Real& x, int r) {
  FiberApprox fb;
  fb.x = x;
  fb.r = r;
  struct Item {
    Thread t;
    std::vector<uint8_t> w;
  };
  std::vector<Item> items;
  items.push_back({Thread{{x}}, {}});
  bool hit_c = false;
  for (int level = 0; level < r; ++level) {
    std::vector<Item> next;
    next.reserve(items.size() * 2);
    for (auto& it : items) {
      const Real& y = it.t.coords.back();
      BranchInfo br = branches_at(f, y);
      if (br.at_b) {
        // single preimage c; itineraries over x are not unique
        hit_c = true;
        Item e = it;
        e.t.coords.push_back(left_pre(f, y));  // = c
        e.w.push_back(1);
        next.push_back(std::move(e));
        continue;
      }
      if (br.left) {
        Item e = it;
        e.t.coords.push_back(left_pre(f, y));
        e.w.push_back(0);
        next.push_back(std::move(e));
      }
      Item e = std::move(it);
      e.t.coords.push_back(right_pre(f, y));
      e.w.push_back(1);
      next.push_back(std::move(e));
    }
    items = std::move(next);
  }
  fb.sorted = !hit_c;
  if (fb.sorted) {
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      return unimodal_cmp(a.w, b.w) == UniCmp::Less;
    });
  }
  fb.threads.reserve(items.size());
  fb.words.reserve(items.size());
  for (auto& it : items) {
    fb.threads.push_back(std::move(it.t));
    Word w;
    w.s = std::move(it.w);
    w.ambiguous_tail = hit_c;
    fb.words.push_back(std::move(w));
  }
  return fb;
}

Thread reconstruct(const TentMap& f, const Real& x,
                   const std::vector<uint8_t>& word) {
  Thread t;
  t.coords.reserve(word.size() + 1);
  t.coords.push_back(x);
  Real cur = x;
  for (size_t i = 0; i < word.size(); ++i) {
    BranchInfo br = branches_at(f, cur);
    if (br.at_b) {
      cur = right_pre(f, cur);  // = c, either symbol
    } else if (word[i] == 0) {
      if (!br.left)
        throw NotRealizable("branch 0 demanded below f(a) at level " +
                            std::to_string(i + 1));
      cur = left_pre(f, cur);
    } else {
      cur = right_pre(f, cur);
    }
    t.coords.push_back(cur);
  }
  return t;
}

bool consecutive(const TentMap& f, const Thread& t1, const Thread& t2,
                 int guard) {
  if (t1.depth() != t2.depth())
    throw DomainError("consecutive: mixed depths");
  const auto& pp = f.p.prec();
  {
    auto s = try_sign(t1.coords[0] - t2.coords[0], pp);
    if (!s || *s != Sign::Zero)
      throw DomainError("consecutive: threads lie over different base points");
  }
  const int r = t1.depth();
  // first differing coordinate
  int k = 0;
  for (int i = 1; i <= r; ++i) {
    auto c = try_cmp(t1.coords[i], t2.coords[i], pp);
    if (!c) throw PrecisionExhausted("consecutive: coordinate comparison");
    if (*c != 0) {
      k = i;
      break;
    }
  }
  if (k == 0) return false;  // identical threads
  if (k > r - guard) return false;  // not decidable within the guard band
  // both tails must follow the upper extreme words of their fibers
  for (const Thread* t : {&t1, &t2}) {
    auto [uw, ut] = extreme_word_upper(f, t->coords[k], r - k);
    Word tail = thread_word(
        f, Thread{{t->coords.begin() + k, t->coords.end()}});
    if (tail.s != uw.s) return false;
  }
  return true;
}

FlatArc flat_arc_of_word(const TentMap& f, const std::vector<uint8_t>& word) {
  const auto& pp = f.p.prec();
  FlatArc arc;
  arc.word = word;
  arc.lo = f.a;
  arc.hi = f.b;
  // level map x_k = u + v * x0 along the branch word; v = +-lambda^-k
  Real u = f.p.real(0);
  Real v = f.p.real(1);
  bool v_pos = true;
  for (size_t k = 1; k <= word.size(); ++k) {
    uint8_t s = word[k - 1];
    if (s == 0) {
      u = u / f.lambda;
      v = v / f.lambda;
    } else {
      u = f.p.real(1) - u / f.lambda;
      v = -(v / f.lambda);
      v_pos = !v_pos;
    }
    // constraint: x_k in [a, c] (s = 0) or [c, b] (s = 1)
    Real c1 = ((s == 0 ? f.a : f.c) - u) / v;
    Real c2 = ((s == 0 ? f.c : f.b) - u) / v;
    if (!v_pos) std::swap(c1, c2);
    bool lo_at_c = (s == 0) == !v_pos;  // binding end of the side interval
    int cmp_lo = cmp_or_throw(c1, arc.lo, pp);
    if (cmp_lo > 0) {
      arc.lo = c1;
      arc.bind_lo = static_cast<int>(k);
      arc.bind_lo_at_c = lo_at_c;
    } else if (cmp_lo == 0 && (arc.bind_lo == 0 ||
                               (!arc.bind_lo_at_c && lo_at_c))) {
      // equality touch: the endpoint also meets this level's interval end;
      // a c-fold is the one that continues the path component
      arc.bind_lo = static_cast<int>(k);
      arc.bind_lo_at_c = lo_at_c;
    }
    int cmp_hi = cmp_or_throw(c2, arc.hi, pp);
    if (cmp_hi < 0) {
      arc.hi = c2;
      arc.bind_hi = static_cast<int>(k);
      arc.bind_hi_at_c = !lo_at_c;
    } else if (cmp_hi == 0 && (arc.bind_hi == 0 ||
                               (!arc.bind_hi_at_c && !lo_at_c))) {
      arc.bind_hi = static_cast<int>(k);
      arc.bind_hi_at_c = !lo_at_c;
    }
  }
  if (cmp_or_throw(arc.lo, arc.hi, pp) > 0)
    throw NotRealizable("flat_arc_of_word: empty constraint set");
  arc.lo_thread = reconstruct(f, arc.lo, word);
  arc.hi_thread = reconstruct(f, arc.hi, word);
  return arc;
}

FlatArc flat_arc_through(const TentMap& f, const Thread& t) {
  const int r = t.depth();
  for (int i = 0; i <= r; ++i)
    if (classify_side(t.coords[i], f.p) == SideClass::AtC)
      throw DomainError("flat_arc_through: coordinate hits c (arc endpoint)");
  Word w = thread_word(f, t);
  return flat_arc_of_word(f, w.s);
}

std::pair<Real, Real> pullback_interval(const TentMap& f, const Real& lo,
                                        const Real& hi,
                                        const std::vector<uint8_t>& word) {
  Real clo = lo, chi = hi;
  for (uint8_t s : word) {
    if (s == 0) {
      clo = clo / f.lambda;
      chi = chi / f.lambda;
    } else {
      Real nlo = f.p.real(1) - chi / f.lambda;
      Real nhi = f.p.real(1) - clo / f.lambda;
      clo = nlo;
      chi = nhi;
    }
  }
  return {clo, chi};
}

ZeroBox zero_box(const TentMap& f, const Real& lo, const Real& hi, int r,
                 int pc_cap) {
  const auto& pp = f.p.prec();
  if (cmp_or_throw(lo, hi, pp) >= 0)
    throw std::invalid_argument("zero_box: empty interval");
  if (cmp_or_throw(lo, f.a, pp) < 0 || cmp_or_throw(hi, f.b, pp) > 0)
    throw std::invalid_argument("zero_box: K outside the core interval");
  // Y check against the truncated postcritical set (b, a, f(a), ...).
  {
    Real v = f.b;
    for (int j = 1; j <= pc_cap; ++j) {
      if (cmp_or_throw(v, lo, pp) >= 0 && cmp_or_throw(v, hi, pp) <= 0)
        throw NotInY("postcritical point f^" + std::to_string(j) +
                     "(c) lies in K");
      if (j < pc_cap) v = tent_eval(f, v);
    }
  }
  ZeroBox box;
  box.lo = lo;
  box.hi = hi;
  box.r = r;
  box.pc_cap = pc_cap;
  struct Item {
    Real lo, hi;
    std::vector<uint8_t> w;
  };
  std::vector<Item> items{{lo, hi, {}}};
  for (int level = 0; level < r; ++level) {
    std::vector<Item> next;
    next.reserve(items.size() * 2);
    for (auto& it : items) {
      auto s_hi = try_sign(f.b - it.hi, pp);
      if (!s_hi) throw PrecisionExhausted("zero_box: position vs b");
      if (*s_hi == Sign::Zero)
        throw NotInY("pullback interval reaches b; K meets the critical orbit");
      auto s_left = try_sign(it.lo - f.lambda * f.a, pp);
      if (!s_left) throw PrecisionExhausted("zero_box: position vs f(a)");
      bool have_left = *s_left != Sign::Negative;
      if (!have_left) {
        // the whole interval must lie below f(a), else K straddles f(a)'s
        // image structure (excluded by the Y check)
        auto s2 = try_sign(f.lambda * f.a - it.hi, pp);
        if (!s2) throw PrecisionExhausted("zero_box: position vs f(a)");
        if (*s2 == Sign::Negative)
          throw NotInY("pullback interval straddles f(a)");
      }
      if (have_left) {
        Item e = it;
        e.lo = it.lo / f.lambda;
        e.hi = it.hi / f.lambda;
        e.w.push_back(0);
        next.push_back(std::move(e));
      }
      Item e = std::move(it);
      Real nlo = f.p.real(1) - e.hi / f.lambda;
      Real nhi = f.p.real(1) - e.lo / f.lambda;
      e.lo = nlo;
      e.hi = nhi;
      e.w.push_back(1);
      next.push_back(std::move(e));
    }
    items = std::move(next);
  }
  box.words.reserve(items.size());
  for (auto& it : items) box.words.push_back(std::move(it.w));
  std::sort(box.words.begin(), box.words.end(),
            [](const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
              return unimodal_cmp(a, b) == UniCmp::Less;
            });
  return box;
}

double thread_distance(const Thread& t1, const Thread& t2) {
  size_t n = std::min(t1.coords.size(), t2.coords.size());
  double d = 0;
  for (size_t i = 0; i < n; ++i) {
    Ival diff = (t1.coords[i] - t2.coords[i]).enclose(128);
    double m = std::max(std::abs(diff.lo_double()), std::abs(diff.hi_double()));
    d += std::ldexp(m, -static_cast<int>(i));
  }
  return d;
}

}  // namespace tentlab
