#include "aoi/single_zone.hpp"

#include <cmath>
#include <string>

#include "aoi/errors.hpp"
#include "aoi/recursions.hpp"

namespace aoi {

ZoneParams ZoneParams::make(double alpha, double b, double rho, double a0, double a_init,
                            int horizon, CostDistribution cost) {
  ZoneParams p;
  p.alpha = alpha;
  p.b = b;
  p.rho = rho;
  p.a0 = a0;
  p.a_init = a_init;
  p.horizon = horizon;
  p.cost = cost;
  switch (cost.kind()) {
    case CostKind::kLinear:
      p.pricing_cdf = cost;
      break;
    case CostKind::kUniform:
      p.pricing_cdf = CostDistribution::linear(0.0, 1.0 / b, b);
      break;
    case CostKind::kTruncatedNormal:
      p.pricing_cdf = cost.fit_linear().dist;
      break;
  }
  p.validate();
  return p;
}

ZoneParams ZoneParams::make_uniform(double alpha, double b, double rho, double a0,
                                    double a_init, int horizon) {
  return make(alpha, b, rho, a0, a_init, horizon, CostDistribution::uniform(b));
}

void ZoneParams::validate() const {
  std::vector<std::string> bad;
  if (!(alpha > 0.0 && alpha <= 1.0)) bad.push_back("alpha: must be in (0, 1]");
  if (!(b > 0.0)) bad.push_back("b: must be > 0");
  if (!(rho > 0.0 && rho <= 1.0)) bad.push_back("rho: must be in (0, 1]");
  if (!(a0 >= 0.0 && a0 < 1.0)) bad.push_back("a0: must be in [0, 1)");
  if (!(a_init >= 0.0)) bad.push_back("a_init: must be >= 0");
  if (horizon < 1) bad.push_back("horizon: must be >= 1");
  if (!(tol > 0.0)) bad.push_back("tol: must be > 0");
  if (max_iter < 1) bad.push_back("max_iter: must be >= 1");
  if (cost.bound() != b) bad.push_back("cost: bound must equal b");
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

std::pair<std::vector<double>, std::vector<double>> backward_coeffs(const ZoneParams& params,
                                                                    double delta) {
  auto coeffs = riccati_backward(params.horizon, params.rho, params.b, params.alpha, delta,
                                 /*w=*/1.0, /*phi=*/{});
  return {std::move(coeffs.q), std::move(coeffs.m)};
}

std::pair<std::vector<double>, std::vector<double>> price_path(const ZoneParams& params,
                                                               double delta,
                                                               std::span<const double> q,
                                                               std::span<const double> m) {
  CoeffPaths coeffs{std::vector<double>(q.begin(), q.end()),
                    std::vector<double>(m.begin(), m.end())};
  auto path = priced_forward(params.horizon, params.rho, params.b, params.alpha, delta,
                             params.a_init, coeffs);
  return {std::move(path.price), std::move(path.ea)};
}

std::vector<double> age_path_original(const ZoneParams& params, std::span<const double> price) {
  std::vector<double> ea(static_cast<std::size_t>(params.horizon) + 1);
  ea[0] = params.a_init;
  for (int t = 0; t < params.horizon; ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    const double accept = params.alpha * price[i] / params.b;
    ea[i + 1] = ea[i] - (ea[i] - params.a0) * accept + (1.0 - accept);
  }
  return ea;
}

double discounted_cost(const ZoneParams& params, std::span<const double> price,
                       std::span<const double> ea) {
  double cost = 0.0;
  double rt = 1.0;
  for (int t = 0; t <= params.horizon; ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    cost += rt * (ea[i] * ea[i] + params.alpha * price[i] * price[i] / params.b);
    rt *= params.rho;
  }
  return cost;
}

PricingPlan solve_delta_fixed_point(const ZoneParams& params, double delta0) {
  params.validate();
  if (delta0 < 0.0) throw ValidationError({"delta0: must be >= 0"});

  double delta = delta0;
  PricingPlan plan;
  plan.delta_history.push_back(delta);
  double diff = 0.0;
  for (int j = 1; j <= params.max_iter; ++j) {
    auto coeffs = riccati_backward(params.horizon, params.rho, params.b, params.alpha, delta,
                                   1.0, {});
    auto path = priced_forward(params.horizon, params.rho, params.b, params.alpha, delta,
                               params.a_init, coeffs);
    const double next = discounted_time_average(path.ea, params.rho, params.horizon, params.a0);
    plan.delta_history.push_back(next);
    diff = std::fabs(next - delta);
    delta = next;
    if (diff <= params.tol) {
      // Recompute the plan at the returned delta so the stored paths are the
      // exact optimum for the dynamics the estimator defines.
      coeffs = riccati_backward(params.horizon, params.rho, params.b, params.alpha, delta, 1.0, {});
      path = priced_forward(params.horizon, params.rho, params.b, params.alpha, delta,
                            params.a_init, coeffs);
      plan.delta = delta;
      plan.q = std::move(coeffs.q);
      plan.m = std::move(coeffs.m);
      plan.cost = discounted_cost(params, path.price, path.ea);
      plan.residual = std::fabs(
          delta - discounted_time_average(path.ea, params.rho, params.horizon, params.a0));
      plan.price = std::move(path.price);
      plan.ea_lin = std::move(path.ea);
      plan.iterations = j;
      return plan;
    }
  }
  throw ConvergenceError("delta fixed point did not converge after " +
                             std::to_string(params.max_iter) + " iterations",
                         diff);
}

}  // namespace aoi
