#pragma once

#include <optional>
#include <vector>

#include "tentlab/tent.hpp"

namespace tentlab {

enum class Copy { Lower, Upper };

// A point of the circle S made of two copies of I glued at the endpoints.
// a and b are stored canonically on the Lower copy.
struct CirclePoint {
  Real x;
  Copy copy = Copy::Lower;
};

struct LiftPoint {
  CirclePoint base;
  long winding = 0;
};

// Projection tau: S -> I.
inline const Real& tau(const CirclePoint& y) { return y.x; }

// Arclength coordinate t in [0,1): t = 0 at a, the Lower copy occupies
// [0, 1/2], and the Upper copy runs from b back to a as t increases to 1.
Real circle_coord(const TentMap& f, const CirclePoint& y);

CirclePoint canonical(const TentMap& f, CirclePoint y);

// The outside map off the plateau, eq-defined piecewise from f. Domain is
// [a, a_hat_u); DomainError on the plateau interior and at a_hat_u.
CirclePoint B_tilde(const TentMap& f, const CirclePoint& y);

// Total outside map: constant f(a)_lower on gamma = [a_hat_u, a].
CirclePoint B_outside(const TentMap& f, const CirclePoint& y);

// Total right inverse of B_tilde.
CirclePoint B_tilde_inverse(const TentMap& f, const CirclePoint& y);

// Lift step for B: winding increments when the image wraps past a.
LiftPoint lift_step(const TentMap& f, const LiftPoint& y);

// gamma membership. Interior is the open arc of Upper points with
// a < x < a_hat.
bool in_gamma_interior(const TentMap& f, const CirclePoint& y);
bool in_gamma_closed(const TentMap& f, const CirclePoint& y);

// Truncated extreme element e(y) = <tau(y), tau(B~^-1 y), ...> of depth r
// (r+1 coordinates).
std::vector<Real> extreme_element(const TentMap& f, const CirclePoint& y,
                                  int r);

enum class HeightType { EndpointMinus, EndpointPlus, NBT, General };

struct HeightResult {
  bool rational = false;
  long m = 0, n = 0;
  HeightType type = HeightType::General;
  bool numeric = false;  // subtype certified only within tolerance
  double bracket_lo = 0.0, bracket_hi = 0.5;  // rotation number bracket
  long iters_used = 0;
};

// Rotation number of the outside map via the first return of the orbit of a
// to gamma; Undecided results carry the lift bracket.
HeightResult height(const TentMap& f, long max_iters,
                    double endpoint_tol = 0x1p-48);

// Rotation-number bracket from the lift of the full outside map B over the
// given number of iterations (valid for all parameters; width <= 2/iters).
std::pair<double, double> rotation_bracket(const TentMap& f, long iters);

struct Classification {
  enum class Kind {
    IrrationalOrUndecided,
    RationalEndpointMinus,
    RationalEndpointPlus,
    RationalNBT,
    RationalGeneral,
  };
  Kind kind = Kind::IrrationalOrUndecided;
  HeightResult h;
  PostcriticalProfile profile;
};

struct Inconsistent : std::runtime_error {
  explicit Inconsistent(const std::string& w) : std::runtime_error(w) {}
};

// Joint height / critical-orbit classification with cross-checks: exact
// EndpointMinus forces a period-n critical orbit, exact EndpointPlus a
// pre-periodic one, exact NBT a period-(n+2) one.
Classification classify(const TentMap& f, long max_iters,
                        int profile_cap = 512);

}  // namespace tentlab
