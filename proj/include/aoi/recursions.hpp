#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace aoi {

// Backward/forward passes shared by the single-zone and multi-zone pricing
// modules. The single-zone case is exactly w = 1 with an empty phi, which
// zeroes the cross-term in M; both modules route through these kernels so
// that case degenerates bit-for-bit.

struct CoeffPaths {
  std::vector<double> q;  // q[0..T], q[T] = w^2
  std::vector<double> m;  // m[0..T], m[T] = 2 w (1-w) phi[T]
};

struct PricedPath {
  std::vector<double> price;  // price[0..T], price[T] = 0
  std::vector<double> ea;     // expected age under the linearized dynamics
};

inline double phi_at(std::span<const double> phi, int t) {
  return phi.empty() ? 0.0 : phi[static_cast<std::size_t>(t)];
}

// Reverse-time quadratic/linear value coefficients for estimator delta and
// weight w. phi (length T+1) feeds the linear coefficient; empty means zero.
inline CoeffPaths riccati_backward(int horizon, double rho, double b, double alpha,
                                   double delta, double w, std::span<const double> phi) {
  const double k = alpha * (delta + 1.0) * (delta + 1.0) / b;
  const std::size_t n = static_cast<std::size_t>(horizon) + 1;
  CoeffPaths out;
  out.q.resize(n);
  out.m.resize(n);
  out.q[n - 1] = w * w;
  out.m[n - 1] = 2.0 * w * (1.0 - w) * phi_at(phi, horizon);
  for (int t = horizon - 1; t >= 0; --t) {
    const double qn = out.q[static_cast<std::size_t>(t) + 1];
    const double mn = out.m[static_cast<std::size_t>(t) + 1];
    const double den = 1.0 + rho * qn * k;  // >= 1
    out.q[static_cast<std::size_t>(t)] = w * w + rho * qn / den;
    out.m[static_cast<std::size_t>(t)] =
        2.0 * w * (1.0 - w) * phi_at(phi, t) + rho * (mn + 2.0 * qn) / den;
  }
  return out;
}

// Forward pass: the price at t is affine in the current expected age with a
// positive slope; prices are clamped to [0, b] and the clamped value drives
// the recursion. price[horizon] = 0.
inline PricedPath priced_forward(int horizon, double rho, double b, double alpha,
                                 double delta, double a_init, const CoeffPaths& coeffs) {
  const double k = alpha * (delta + 1.0) * (delta + 1.0) / b;
  const std::size_t n = static_cast<std::size_t>(horizon) + 1;
  PricedPath out;
  out.price.assign(n, 0.0);
  out.ea.assign(n, 0.0);
  out.ea[0] = a_init;
  for (int t = 0; t < horizon; ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    const double qn = coeffs.q[i + 1];
    const double mn = coeffs.m[i + 1];
    const double num = rho * mn * (delta + 1.0) + 2.0 * rho * (delta + 1.0) * qn * (out.ea[i] + 1.0);
    const double den = 2.0 + 2.0 * rho * qn * k;
    const double p = std::clamp(num / den, 0.0, b);
    out.price[i] = p;
    out.ea[i + 1] = out.ea[i] - delta * alpha * p / b + (1.0 - alpha * p / b);
  }
  return out;
}

// Discount-weighted average of (ea[t] - a0) over t = 0..horizon-1: the delta
// estimator update. rho = 1 uses the plain arithmetic mean (the analytic
// limit of the weights).
inline double discounted_time_average(std::span<const double> ea, double rho, int horizon,
                                      double a0) {
  double sum = 0.0;
  double rt = 1.0;
  for (int t = 0; t < horizon; ++t) {
    sum += rt * (ea[static_cast<std::size_t>(t)] - a0);
    rt *= rho;
  }
  if (rho == 1.0) return sum / static_cast<double>(horizon);
  return (1.0 - rho) / (1.0 - std::pow(rho, horizon)) * sum;
}

}  // namespace aoi
