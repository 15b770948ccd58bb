#pragma once

#include <functional>
#include <random>
#include <string>

#include "tentlab/glue.hpp"

namespace tentlab {

struct UnknownSuite : std::runtime_error {
  explicit UnknownSuite(const std::string& w) : std::runtime_error(w) {}
};

struct Report {
  std::string name;
  enum class Status { Pass, Fail, Undecided } status = Status::Undecided;
  double gap = 0.0;  // worst observed deviation
  double tol = 0.0;
  std::string detail;
  std::string lambda_spec;
  unsigned long seed = 0;
  int depth = 0;
};

// Finite-depth tartan: a zero-box over J as the unstable bundle, fiber arcs
// over a grid of stable base points, and the (implicit) intersection matrix
// thread(w, x) = reconstruct(x, w).
struct TartanApprox {
  Real k_lo, k_hi;
  int r = 0;
  ZeroBox box;
  std::vector<Real> stable_xs;
  std::vector<FiberArc> stable;
};

TartanApprox build_tartan(const TentMap& f, const Density& d, const Real& k_lo,
                          const Real& k_hi, int r, int n_stable,
                          int pc_cap = 512);

// Product measure of index rectangles against the disintegration of the
// ambient measure, plus the stable holonomy sub-check.
Report check_compatibility(const TentMap& f, const Density& d,
                           const TartanApprox& t, double tol,
                           unsigned long seed, int n_rects = 32);

// One application of fhat to all fibers: stable masses contract by exactly
// 1/lambda, unstable base lengths expand by lambda (branch-split aware), and
// the image intersection matrix stays total.
Report check_scaling(const TentMap& f, const Density& d,
                     const TartanApprox& t);

Report check_tameness(const TentMap& f, const Density& d, int n_samples,
                      int depth, unsigned long seed);

// Regularity shadow: stream-arc segments between nearby intersection points
// stay within 2*delta chart-coordinate balls for shrinking delta.
Report check_regularity(const TentMap& f, const Density& d,
                        const TartanApprox& t, int n_deltas = 10);

// Named property suites over all modules; names() lists them. "all" runs
// the whole registry.
std::vector<std::string> suite_names();
std::vector<Report> run_suite(const std::vector<std::string>& names,
                              const Parameter& p, unsigned long seed,
                              int depth, int threads = 1);

// Deterministic uniform rational in (0,1) with 48-bit resolution.
mpq_class rand_unit(std::mt19937_64& rng);
// Random point of (a, b) bounded away from the ends by margin/2^16.
Real rand_point(const TentMap& f, std::mt19937_64& rng, int margin = 1);

}  // namespace tentlab
