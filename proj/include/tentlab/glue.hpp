#pragma once

#include <deque>

#include "tentlab/measure.hpp"

namespace tentlab {

struct InGrandOrbit : std::runtime_error {
  explicit InGrandOrbit(const std::string& w) : std::runtime_error(w) {}
};
struct TypeMismatch : std::runtime_error {
  explicit TypeMismatch(const std::string& w) : std::runtime_error(w) {}
};
struct DepthExhausted : std::runtime_error {
  explicit DepthExhausted(const std::string& w) : std::runtime_error(w) {}
};

// Order-preserving embedding of 0/1 words into [0,1]: digit 2*eps_r at
// base-3 place r+1, eps_r the prefix-sum parity. A finite word maps to the
// closed interval spanned by its continuations.
std::pair<mpq_class, mpq_class> H_embed(const std::vector<uint8_t>& word);

// Fiber over x embedded as an arc: threads in unimodal order, H coordinates,
// and the cumulative alpha-measure coordinate cum (cum[i], cum[i+1] bound
// the i-th cylinder; identified neighbors share the boundary value).
struct FiberArc {
  Real x;
  int r = 0;
  std::vector<Thread> threads;
  std::vector<Word> words;
  std::vector<mpq_class> h_lo, h_hi;
  std::vector<Real> cum;  // size threads+1; cum.front()=0, cum.back()=phi(x)
  std::vector<std::pair<int, int>> identified;  // consecutive neighbor pairs
};

FiberArc fiber_arc(const TentMap& f, const Density& d, const Real& x, int r,
                   int guard = 8, int go_cap = 512);

// Capped grand-orbit test used by fiber_arc and tartan construction: throws
// InGrandOrbit when the forward orbit of x (64 steps) provably meets c or
// one of the first go_cap postcritical points.
void ensure_not_in_grand_orbit(const TentMap& f, const Real& x, int go_cap);

// Identification class of the extreme-element certificate fhat^k(e(y)).
struct IdentClass {
  enum class Kind { EI, EII, EIII, Trivial } kind = Kind::Trivial;
  int fhat_exponent = 0;    // k - s, the exponent at the gamma entry
  long gamma_entry = -1;    // first s >= 0 with B~^s(y) in the plateau interior
  std::vector<Thread> members;
};

IdentClass identify_partner(const TentMap& f, const Classification& cl,
                            const CirclePoint& y, int k, int depth,
                            long horizon = 4096);

// Chart patch in (x0, psi) coordinates over an interval K in Y: psi of an
// arc at x is the alpha-mass of the fiber part weakly below the arc's word.
struct ChartPatch {
  Real lo, hi;
  int r = 0;
  std::vector<std::vector<uint8_t>> words;  // sorted unimodal
  std::vector<double> xs;
  std::vector<std::vector<double>> psi;  // psi[arc][sample]
};

ChartPatch chart_patch(const TentMap& f, const Density& d, const Real& lo,
                       const Real& hi, int r, int n_samples,
                       int pc_cap = 512);

// Chain of 0-flat arcs of the path component through the seed, produced by
// flipping the branch at the binding c-level past each arc endpoint.
struct Streamline {
  std::deque<FlatArc> arcs;
  bool exhausted_lo = false, exhausted_hi = false;
};

Streamline trace_streamline(const TentMap& f, const Thread& seed, int steps);

// Finite approximation of the Cantor set C_S: the B~-orbit of f(a)_l with
// its gap structure; stops at the certified step if the orbit meets gamma.
struct CantorApprox {
  std::vector<CirclePoint> points;  // B~^k(a), k = 1..horizon
  std::vector<double> ts;           // circle coordinates, orbit order
  bool entered_gamma = false;
  long entered_step = 0;  // exponent k with B~^k(a) in gamma
  std::vector<std::pair<double, double>> gaps;  // sorted complementary arcs
  double min_dist_to_a = 1.0;       // over Lower-copy points, x - a
  double min_dist_to_ahat = 1.0;    // over Upper-copy points, x - a_hat
};

CantorApprox cantor_approx(const TentMap& f, long horizon);

// Unstable stream measure of a sub-arc: Lebesgue length of its base, halved
// on spikes.
Real spike_aware_measure(const TentMap& f, const FlatArc& arc,
                         const Real& sub_lo, const Real& sub_hi,
                         bool is_spike);

// Thread of fhat^m(e(y)) truncated at the given depth (m may be negative).
Thread extreme_thread(const TentMap& f, const CirclePoint& y, int m,
                      int depth);

}  // namespace tentlab
