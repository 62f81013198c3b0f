#include "aoi/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace aoi {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

CostDistribution CostDistribution::uniform(double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("cost bound must be > 0");
  return CostDistribution(CostKind::kUniform, bound);
}

CostDistribution CostDistribution::truncated_normal(double mu, double sigma, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("cost bound must be > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  CostDistribution d(CostKind::kTruncatedNormal, bound);
  d.mu_ = mu;
  d.sigma_ = sigma;
  // Normalized erf ramp between the truncation points. sigma scales the erf
  // argument directly, so it acts as an inverse width: larger sigma means a
  // sharper transition around mu.
  d.erf_lo_ = std::erf((0.0 - mu) * sigma * kInvSqrt2);
  const double hi = std::erf((bound - mu) * sigma * kInvSqrt2);
  d.erf_span_ = hi - d.erf_lo_;
  if (!(d.erf_span_ > 0.0)) throw std::invalid_argument("degenerate truncated normal");
  return d;
}

CostDistribution CostDistribution::linear(double a1, double a2, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("cost bound must be > 0");
  CostDistribution d(CostKind::kLinear, bound);
  d.a1_ = a1;
  d.a2_ = a2;
  return d;
}

double CostDistribution::cdf(double pi) const {
  if (!(pi >= 0.0 && pi <= bound_)) {
    throw std::domain_error("cdf argument outside [0, bound]");
  }
  switch (kind_) {
    case CostKind::kUniform:
      return pi / bound_;
    case CostKind::kTruncatedNormal:
      return (std::erf((pi - mu_) * sigma_ * kInvSqrt2) - erf_lo_) / erf_span_;
    case CostKind::kLinear:
      return clamp01(a1_ + a2_ * pi);
  }
  return 0.0;  // unreachable
}

double CostDistribution::inverse_cdf(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("inverse_cdf argument outside [0, 1]");
  }
  switch (kind_) {
    case CostKind::kUniform:
      return u * bound_;
    case CostKind::kLinear: {
      if (u <= clamp01(a1_)) return 0.0;
      if (a2_ <= 0.0) return bound_;
      return std::min(bound_, (u - a1_) / a2_);
    }
    case CostKind::kTruncatedNormal: {
      double lo = 0.0, hi = bound_;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) >= u ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;  // unreachable
}

LinearFit CostDistribution::fit_linear(int grid_points) const {
  if (kind_ == CostKind::kLinear) {
    throw std::invalid_argument("fit_linear: distribution is already linear");
  }
  if (grid_points < 2) throw std::invalid_argument("fit_linear: grid_points must be >= 2");

  const int n = grid_points;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = bound_ * static_cast<double>(i) / static_cast<double>(n - 1);
    ys[i] = cdf(xs[i]);
  }
  double xbar = 0.0, ybar = 0.0;
  for (int i = 0; i < n; ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= n;
  ybar /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  const double a2 = sxy / sxx;
  const double a1 = ybar - a2 * xbar;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (a1 + a2 * xs[i]);
    ss += r * r;
  }
  return LinearFit{linear(a1, a2, bound_), std::sqrt(ss)};
}

std::string CostDistribution::describe() const {
  char buf[128];
  switch (kind_) {
    case CostKind::kUniform:
      std::snprintf(buf, sizeof(buf), "uniform(b=%g)", bound_);
      break;
    case CostKind::kTruncatedNormal:
      std::snprintf(buf, sizeof(buf), "truncated_normal(mu=%g, sigma=%g, b=%g)", mu_, sigma_, bound_);
      break;
    case CostKind::kLinear:
      std::snprintf(buf, sizeof(buf), "linear(a1=%g, a2=%g, b=%g)", a1_, a2_, bound_);
      break;
  }
  return buf;
}

}  // namespace aoi
