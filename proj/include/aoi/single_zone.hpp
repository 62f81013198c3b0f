#pragma once

#include <span>
#include <utility>
#include <vector>

#include "aoi/cost_model.hpp"

namespace aoi {

// One zone's pricing scenario. The pricing formulas work through the cost
// bound b (uniform acceptance probability alpha*p/b); `cost` keeps the full
// sampling-cost law for the stochastic simulator, and `pricing_cdf` the
// linear approximation (fitted at load time when the law is not uniform).
struct ZoneParams {
  double alpha = 1.0;   // per-slot arrival probability, (0, 1]
  double b = 1.0;       // cost upper bound, > 0
  double rho = 0.9;     // discount factor, (0, 1]; 1 only for finite horizon
  double a0 = 0.0;      // expected transmission delay, [0, 1)
  double a_init = 0.0;  // initial age, >= 0
  int horizon = 1;      // slots, >= 1

  CostDistribution cost = CostDistribution::uniform(1.0);
  CostDistribution pricing_cdf = CostDistribution::linear(0.0, 1.0, 1.0);

  double tol = 1e-3;     // fixed-point stopping tolerance
  int max_iter = 10000;  // fixed-point iteration cap

  // Builds params with pricing_cdf derived from `cost` (identity for linear,
  // exact 1/b slope for uniform, least-squares fit otherwise). Validates.
  static ZoneParams make(double alpha, double b, double rho, double a0, double a_init,
                         int horizon, CostDistribution cost);

  // Convenience: uniform costs on [0, b].
  static ZoneParams make_uniform(double alpha, double b, double rho, double a0,
                                 double a_init, int horizon);

  // Arrival probability per slot from a Poisson flow of rate `lambda` and
  // slot duration `slot`.
  static double arrival_rate(double lambda, double slot) { return lambda * slot; }

  // Throws ValidationError listing every violated bound.
  void validate() const;
};

// A solved finite-horizon policy: the fixed-point estimator, the backward
// coefficients, and the open-loop price/expected-age paths.
struct PricingPlan {
  double delta = 0.0;
  std::vector<double> q;       // q[0..T], q[T] = 1
  std::vector<double> m;       // m[0..T], m[T] = 0
  std::vector<double> price;   // price[0..T], price[T] = 0, clamped to [0, b]
  std::vector<double> ea_lin;  // planned expected age, linearized dynamics
  double cost = 0.0;           // discounted objective of the plan
  int iterations = 0;
  double residual = 0.0;                  // |delta - estimator(ea_lin)| at return
  std::vector<double> delta_history;      // estimator iterates, starting at the initial guess
};

// Reverse-time coefficient recursions for a fixed estimator delta.
std::pair<std::vector<double>, std::vector<double>> backward_coeffs(const ZoneParams& params,
                                                                    double delta);

// Forward price/age pass from coefficients (linearized dynamics).
std::pair<std::vector<double>, std::vector<double>> price_path(const ZoneParams& params,
                                                               double delta,
                                                               std::span<const double> q,
                                                               std::span<const double> m);

// Expected-age path of the *original* nonlinear dynamics under a given
// price sequence: the age-reduction term is (ea - a0) rather than delta.
std::vector<double> age_path_original(const ZoneParams& params, std::span<const double> price);

// sum_t rho^t (ea[t]^2 + alpha p[t]^2 / b) over t = 0..T.
double discounted_cost(const ZoneParams& params, std::span<const double> price,
                       std::span<const double> ea);

// Plain fixed-point iteration on the estimator delta: backward coefficients,
// forward path, discounted time average, repeat until successive estimates
// differ by at most params.tol. The returned plan is recomputed at the final
// delta so it is the exact optimum of its own linearized dynamics.
// Throws ConvergenceError after params.max_iter.
PricingPlan solve_delta_fixed_point(const ZoneParams& params, double delta0 = 0.0);

}  // namespace aoi
