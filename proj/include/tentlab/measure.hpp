#pragma once

#include <vector>

#include "tentlab/ilim.hpp"

namespace tentlab {

struct NotMarkov : std::runtime_error {
  explicit NotMarkov(const std::string& w) : std::runtime_error(w) {}
};
struct NotConverged : std::runtime_error {
  explicit NotConverged(const std::string& w) : std::runtime_error(w) {}
};

// Invariant density of the core tent map. Three representations:
//  - MarkovExact: piecewise constant on the postcritical partition, exact
//    field values (post-critically finite parameters only);
//  - StepSeries: the exact fixed point of the transfer equation written as a
//    jump series along the orbit of f(a), truncated at a certified tail;
//  - Grid: mass-conserving finite-volume transfer (interval-image weights)
//    on N equal cells, iterated to a fixed point.
class Density {
 public:
  enum class Kind { MarkovExact, StepSeries, Grid };

  Kind kind() const { return kind_; }
  const TentMap& map() const { return *f_; }

  // Density value at x (points of the partition take the right-hand value).
  Real eval(const Real& x) const;
  double eval_d(double x) const;

  // integral of the density over [lo, hi] (clipped to the core interval)
  Real integral(const Real& lo, const Real& hi) const;
  double integral_d(double lo, double hi) const;

  double floor_value() const;  // positive lower bound over the core interval
  double residual() const { return residual_; }
  int grid_cells() const { return static_cast<int>(grid_.size()); }
  double cell_width() const;
  const std::vector<double>& grid_values() const { return grid_; }

  friend Density density_markov(const TentMap& f);
  friend Density density_series(const TentMap& f, double tail_bound);
  friend Density density_grid(const TentMap& f, int cells, double tol,
                              int max_iters);

 private:
  Density() = default;

  Kind kind_ = Kind::Grid;
  std::shared_ptr<const TentMap> f_;
  // MarkovExact: partition_ points ascending (size M+1), values_ size M.
  // StepSeries: partition_ = jump locations ascending, values_ = cumulative
  // density kappa + prefix sums (values_[i] on [partition_[i],
  // partition_[i+1])), same lookup as Markov after construction.
  std::vector<Real> partition_;
  std::vector<Real> values_;
  std::vector<double> part_lo_, part_hi_;  // certified double brackets
  std::vector<double> values_d_;
  // Grid
  std::vector<double> grid_;
  double residual_ = 0.0;
};

// Exact piecewise-constant density on the postcritical partition. Requires
// a (pre)periodic critical orbit; NotMarkov otherwise.
Density density_markov(const TentMap& f);

// Exact jump-series density for parameters whose critical orbit is not
// finite within the truncation horizon; tail_bound bounds the dropped mass.
Density density_series(const TentMap& f, double tail_bound = 0x1p-70);

// Finite-volume transfer iteration from the uniform density; stops when the
// L1 change drops below tol. The recorded residual is the L1 defect of the
// converged fixed point under one more transfer step.
Density density_grid(const TentMap& f, int cells, double tol, int max_iters);

struct AlphaValue {
  Real value;
};

// alpha-mass of the depth-r cylinder of a thread: density(deepest)/lambda^r.
AlphaValue alpha_cylinder(const Density& d, const Thread& cyl);

// alpha_x of a zero-box: sum over arcs of the cylinder masses over x.
Real alpha_of_box(const Density& d, const ZeroBox& box, const Real& x);

struct DisintegrationResult {
  double lhs = 0, rhs = 0, gap = 0;
  int cells = 0;
};

// Compares the quadrature of x -> alpha_x(pi_r^{-1}(J)) over I against the
// pushforward value mu(J).
DisintegrationResult disintegration_check(const Density& d, int r, double jlo,
                                          double jhi, int quad_cells);

// Lebesgue length of a subinterval of a flat arc's base interval.
Real unstable_measure(const TentMap& f, const FlatArc& arc, const Real& sub_lo,
                      const Real& sub_hi);

Real real_pow(const Real& base, int n, const Real& one);

}  // namespace tentlab
