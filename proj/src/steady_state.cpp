#include "aoi/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aoi/errors.hpp"
#include "aoi/recursions.hpp"

namespace aoi {

namespace {

double gain(const ZoneParams& params, double delta) {
  return params.alpha * (delta + 1.0) * (delta + 1.0) / params.b;
}

}  // namespace

double steady_q(const ZoneParams& params, double delta) {
  if (!(delta >= 0.0)) throw std::domain_error("steady_q: delta must be >= 0");
  if (!(params.rho < 1.0)) throw std::domain_error("steady_q: requires rho < 1");
  const double c = params.b * (1.0 - params.rho) /
                   (params.rho * params.alpha * (delta + 1.0) * (delta + 1.0));
  const double d = 4.0 * params.b / (params.rho * params.alpha * (delta + 1.0) * (delta + 1.0));
  return 0.5 * (1.0 - c + std::sqrt((1.0 - c) * (1.0 - c) + d));
}

double steady_m(const ZoneParams& params, double delta, double q) {
  if (!(params.rho < 1.0)) throw std::domain_error("steady_m: requires rho < 1");
  return 2.0 * params.rho * q / (1.0 - params.rho + params.rho * q * gain(params, delta));
}

double delta_balance(const ZoneParams& params, double delta) {
  const double q = steady_q(params, delta);
  const double qk = params.rho * q * gain(params, delta);
  return qk * (delta + params.a0) * (1.0 - params.rho + qk) /
         ((1.0 - params.rho) * (1.0 + qk));
}

double solve_delta_infinite(const ZoneParams& params) {
  if (!(params.rho < 1.0)) throw std::domain_error("solve_delta_infinite: requires rho < 1");
  if (delta_balance(params, 0.0) >= 1.0) {
    throw ConvergenceError("solve_delta_infinite: no positive root (v(0) >= 1)",
                           delta_balance(params, 0.0) - 1.0);
  }
  double hi = 1.0;
  int doublings = 0;
  while (delta_balance(params, hi) <= 1.0) {
    hi *= 2.0;
    if (++doublings > 60) {
      throw ConvergenceError("solve_delta_infinite: bracket expansion failed", hi);
    }
  }
  double lo = 0.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (delta_balance(params, mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

InfinitePaths price_infinite(const ZoneParams& params, double delta, int t_max) {
  const double q = steady_q(params, delta);
  const double m = steady_m(params, delta, q);
  const double k = gain(params, delta);
  const double qk = params.rho * q * k;
  const double r = 1.0 / (1.0 + qk);           // per-slot age decay
  const double c = (2.0 - params.rho * m * k) / (2.0 + 2.0 * qk);  // forcing term

  InfinitePaths out;
  out.price.resize(static_cast<std::size_t>(t_max) + 1);
  out.ea.resize(static_cast<std::size_t>(t_max) + 1);
  out.ea_limit = c / (1.0 - r);
  out.price_limit = params.b / (params.alpha * (delta + 1.0));
  double rt = 1.0;  // r^t
  for (int t = 0; t <= t_max; ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    out.ea[i] = rt * params.a_init + c * (1.0 - rt) / (1.0 - r);
    out.price[i] = (params.rho * m * (delta + 1.0) +
                    2.0 * params.rho * (delta + 1.0) * q * (out.ea[i] + 1.0)) /
                   (2.0 + 2.0 * qk);
    rt *= r;
  }
  return out;
}

GapResult epsilon_gap(const ZoneParams& params, int horizon) {
  ZoneParams p = params;
  p.horizon = horizon;
  const PricingPlan plan = solve_delta_fixed_point(p);

  // Truncated constant-coefficient path under the same estimator, clamped to
  // [0, b] and with the terminal price forced to zero; its age response is
  // simulated forward so the cost matches the prices actually applied.
  const double q = steady_q(p, plan.delta);
  const double m = steady_m(p, plan.delta, q);
  const double k = gain(p, plan.delta);
  std::vector<double> price(static_cast<std::size_t>(horizon) + 1, 0.0);
  std::vector<double> ea(static_cast<std::size_t>(horizon) + 1, 0.0);
  ea[0] = p.a_init;
  for (int t = 0; t < horizon; ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    const double num = p.rho * m * (plan.delta + 1.0) +
                       2.0 * p.rho * (plan.delta + 1.0) * q * (ea[i] + 1.0);
    const double pt = std::clamp(num / (2.0 + 2.0 * p.rho * q * k), 0.0, p.b);
    price[i] = pt;
    ea[i + 1] = ea[i] - plan.delta * p.alpha * pt / p.b + (1.0 - p.alpha * pt / p.b);
  }

  GapResult out;
  out.u_finite = plan.cost;
  out.u_infinite = discounted_cost(p, price, ea);
  out.gap = out.u_infinite - out.u_finite;
  return out;
}

SteadyState solve_steady_state(const ZoneParams& params) {
  SteadyState s;
  s.delta_inf = solve_delta_infinite(params);
  s.q = steady_q(params, s.delta_inf);
  s.m = steady_m(params, s.delta_inf, s.q);
  const double qk = params.rho * s.q * gain(params, s.delta_inf);
  const double r = 1.0 / (1.0 + qk);
  const double c = (2.0 - params.rho * s.m * gain(params, s.delta_inf)) / (2.0 + 2.0 * qk);
  s.ea_limit = c / (1.0 - r);
  s.price_limit = params.b / (params.alpha * (s.delta_inf + 1.0));
  return s;
}

}  // namespace aoi
