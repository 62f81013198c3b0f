#pragma once

#include <string>

namespace aoi {

enum class CostKind { kUniform, kTruncatedNormal, kLinear };

struct LinearFit;

// Law of a user's private sampling cost on [0, bound].
//
// Three variants: exact uniform, a truncated-normal-style law defined through
// a normalized erf ramp, and the linear CDF approximation a1 + a2*pi used by
// the pricing formulas (clamped to [0,1] at evaluation time).
//
// Immutable after construction; all methods are pure.
class CostDistribution {
 public:
  static CostDistribution uniform(double bound);
  static CostDistribution truncated_normal(double mu, double sigma, double bound);
  static CostDistribution linear(double a1, double a2, double bound);

  CostKind kind() const { return kind_; }
  double bound() const { return bound_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }

  // F(pi) for pi in [0, bound]; throws std::domain_error outside.
  double cdf(double pi) const;

  // Smallest pi in [0, bound] with cdf(pi) >= u, for u in [0, 1].
  // Closed form for uniform/linear, bisection to 1e-10 otherwise. A linear
  // CDF may saturate below 1 before the bound; the residual mass sits at the
  // bound itself.
  double inverse_cdf(double u) const;

  // Least-squares fit of a1 + a2*pi to the CDF over grid_points evenly
  // spaced values on [0, bound]. Precondition: not already linear,
  // grid_points >= 2.
  LinearFit fit_linear(int grid_points = 201) const;

  std::string describe() const;

 private:
  CostDistribution(CostKind kind, double bound) : kind_(kind), bound_(bound) {}

  CostKind kind_;
  double bound_ = 0.0;
  double mu_ = 0.0;
  double sigma_ = 0.0;
  double a1_ = 0.0;
  double a2_ = 0.0;
  // cached erf terms for the truncated normal
  double erf_lo_ = 0.0;
  double erf_span_ = 1.0;
};

struct LinearFit {
  CostDistribution dist;  // kLinear with the fitted coefficients
  double residual_norm;   // Euclidean norm of the grid residuals
};

}  // namespace aoi
