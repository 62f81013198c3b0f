#pragma once

#include <vector>

#include "aoi/single_zone.hpp"

namespace aoi {

// Infinite-horizon limits of the backward coefficients and the recursion-free
// price they enable.
struct SteadyState {
  double q = 0.0;
  double m = 0.0;
  double delta_inf = 0.0;
  double price_limit = 0.0;  // b / (alpha (delta+1))
  double ea_limit = 0.0;     // limiting expected age
};

// Closed-form limit of the reverse-time q recursion. Requires rho < 1,
// delta >= 0.
double steady_q(const ZoneParams& params, double delta);

// m = 2 rho q / (1 - rho + rho q alpha (delta+1)^2 / b). Requires rho < 1.
double steady_m(const ZoneParams& params, double delta, double q);

// The increasing function v(delta) whose unit root is the infinite-horizon
// estimator. Exposed for monotonicity checks.
double delta_balance(const ZoneParams& params, double delta);

// Bisection root of v(delta) = 1 to 1e-9, bracket grown by doubling.
// Throws ConvergenceError if no root exists below the bracket (v(0) >= 1)
// or the bracket fails to expand.
double solve_delta_infinite(const ZoneParams& params);

struct InfinitePaths {
  std::vector<double> price;  // p[0..t_max] from the constant-coefficient formula
  std::vector<double> ea;     // geometric-decay closed form
  double price_limit = 0.0;
  double ea_limit = 0.0;
};

// Constant-coefficient price and expected-age paths for a given estimator
// (normally the solve_delta_infinite root), plus their analytic limits.
InfinitePaths price_infinite(const ZoneParams& params, double delta, int t_max = 500);

struct GapResult {
  double u_finite = 0.0;    // discounted cost of the finite-horizon plan
  double u_infinite = 0.0;  // cost of the truncated constant-coefficient price
  double gap = 0.0;         // u_infinite - u_finite, >= 0 up to roundoff
};

// Cost excess of the simplified steady-state price over the finite-horizon
// plan at horizon T. Both paths are evaluated under the same linearized
// dynamics (the plan's fixed-point estimator), and the truncated path gets
// p(T) = 0 so the two share the terminal convention.
GapResult epsilon_gap(const ZoneParams& params, int horizon);

// Convenience bundle: the infinite-horizon estimator with its steady state.
SteadyState solve_steady_state(const ZoneParams& params);

}  // namespace aoi
