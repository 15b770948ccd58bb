#pragma once

#include <vector>

#include "tentlab/outside.hpp"
#include "tentlab/tent.hpp"

namespace tentlab {

struct NotRealizable : std::runtime_error {
  explicit NotRealizable(const std::string& w) : std::runtime_error(w) {}
};
struct NotInY : std::runtime_error {
  explicit NotInY(const std::string& w) : std::runtime_error(w) {}
};

// Finite-depth point of the inverse limit: coordinates shallowest first,
// f(coords[i+1]) = coords[i].
struct Thread {
  std::vector<Real> coords;
  int depth() const { return static_cast<int>(coords.size()) - 1; }
};

Thread fhat(const TentMap& f, const Thread& t);
Thread fhat_inverse(const Thread& t);

// Branch word of a thread: symbol i is the side of coords[i+1] relative to c
// (0 left, 1 right). Exact c hits are coded 1 and flagged ambiguous.
Word thread_word(const TentMap& f, const Thread& t);

// Greedy maximal/minimal admissible branch words over x, together with the
// thread they reconstruct. These are the itineraries of the extreme fiber
// elements e(x_u) and e(x_l).
std::pair<Word, Thread> extreme_word_upper(const TentMap& f, const Real& x,
                                           int r);
std::pair<Word, Thread> extreme_word_lower(const TentMap& f, const Real& x,
                                           int r);

struct FiberApprox {
  Real x;
  int r = 0;
  std::vector<Thread> threads;  // sorted by unimodal order of branch words
  std::vector<Word> words;      // parallel to threads
  bool sorted = true;  // false when a coordinate hit c exactly (x in PC)
};

// All depth-r backward branches over x, sorted by the unimodal order of
// their branch words (skipped, with sorted=false, when itineraries are not
// unique because some coordinate hits c exactly).
FiberApprox fiber(const TentMap& f, const Real& x, int r);

// The unique thread over x with the given branch word.
Thread reconstruct(const TentMap& f, const Real& x,
                   const std::vector<uint8_t>& word);

// Tail characterization of consecutive fiber elements: with k the first
// differing coordinate index, both tails from level k must follow the upper
// extreme of their fiber. The first difference must occur at index
// <= depth - guard for a positive answer at finite depth.
bool consecutive(const TentMap& f, const Thread& t1, const Thread& t2,
                 int guard = 8);

// Maximal interval J around x0 over which the branch word of t pulls back
// homeomorphically. Binding constraints record which pullback level stops
// the arc at each end (0 when the core interval end binds first).
struct FlatArc {
  std::vector<uint8_t> word;
  Real lo, hi;  // J = [lo, hi]
  Thread lo_thread, hi_thread;
  int bind_lo = 0, bind_hi = 0;
  bool bind_lo_at_c = false, bind_hi_at_c = false;
};

FlatArc flat_arc_through(const TentMap& f, const Thread& t);

// Flat arc of a branch word (no seed thread needed); NotRealizable when the
// constraint set is empty.
FlatArc flat_arc_of_word(const TentMap& f, const std::vector<uint8_t>& word);

struct ZeroBox {
  Real lo, hi;  // J
  int r = 0;
  int pc_cap = 0;  // how many postcritical points the Y check saw
  std::vector<std::vector<uint8_t>> words;  // sorted unimodal
};

// Verifies K against the first pc_cap postcritical points (NotInY on a hit),
// then enumerates all depth-r branch words whose pullback of K is defined.
ZeroBox zero_box(const TentMap& f, const Real& lo, const Real& hi, int r,
                 int pc_cap = 512);

// Interval pullback of [lo,hi] through a branch word; returns the deepest
// interval. Used by zero-box consumers for exact per-arc spans.
std::pair<Real, Real> pullback_interval(const TentMap& f, const Real& lo,
                                        const Real& hi,
                                        const std::vector<uint8_t>& word);

// Metric d(x,y) = sum |x_i - y_i| / 2^i on threads of equal depth,
// as a double upper bound.
double thread_distance(const Thread& t1, const Thread& t2);

}  // namespace tentlab
