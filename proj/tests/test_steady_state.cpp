#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aoi/errors.hpp"
#include "aoi/single_zone.hpp"
#include "aoi/steady_state.hpp"

using namespace aoi;

namespace {

ZoneParams base_params(double alpha, double b, double rho) {
  return ZoneParams::make_uniform(alpha, b, rho, 0.0, 0.0, 100);
}

// independent oracle: iterate the reverse-time recursions to their limit
std::pair<double, double> iterate_to_limit(const ZoneParams& p, double delta) {
  const double k = p.alpha * (delta + 1.0) * (delta + 1.0) / p.b;
  double q = 1.0, m = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double den = 1.0 + p.rho * q * k;
    const double qn = 1.0 + p.rho * q / den;
    const double mn = p.rho * (m + 2.0 * q) / den;
    const bool done = std::fabs(qn - q) < 1e-13 && std::fabs(mn - m) < 1e-13;
    q = qn;
    m = mn;
    if (done) break;
  }
  return {q, m};
}

}  // namespace

TEST_SUITE_BEGIN("steady_state");

TEST_CASE("closed-form q matches the recursion limit") {
  const auto p = base_params(1.0, 2.0, 0.9);
  const auto [q_lim, m_lim] = iterate_to_limit(p, 0.14);
  const double q = steady_q(p, 0.14);
  CHECK(q == doctest::Approx(1.786).epsilon(1e-3));
  CHECK(q == doctest::Approx(q_lim).epsilon(1e-10));
}

TEST_CASE("q satisfies its self-consistency equation") {
  for (double alpha : {0.5, 0.9, 1.0}) {
    for (double rho : {0.3, 0.7, 0.95}) {
      for (double delta : {0.0, 0.14, 1.2}) {
        const auto p = base_params(alpha, 2.0, rho);
        const double k = alpha * (delta + 1.0) * (delta + 1.0) / 2.0;
        const double q = steady_q(p, delta);
        CHECK(q == doctest::Approx(1.0 + rho * q / (1.0 + rho * q * k)).epsilon(1e-10));
        CHECK(q >= 1.0);
      }
    }
  }
}

TEST_CASE("closed-form m matches the recursion limit") {
  const auto p = base_params(1.0, 2.0, 0.9);
  const auto [q_lim, m_lim] = iterate_to_limit(p, 0.14);
  CHECK(steady_m(p, 0.14, steady_q(p, 0.14)) == doctest::Approx(m_lim).epsilon(1e-6));
}

TEST_CASE("m edge behavior") {
  ZoneParams p0;
  p0.alpha = 1.0;
  p0.b = 2.0;
  p0.rho = 0.0;  // no future weight
  CHECK(steady_m(p0, 0.5, 1.0) == 0.0);

  const auto p = base_params(1.0, 2.0, 0.9);
  CHECK(steady_m(p, 1e6, steady_q(p, 1e6)) < 1e-5);
  CHECK(steady_m(p, 1e6, steady_q(p, 1e6)) > 0.0);

  auto p1 = p;
  p1.rho = 1.0;
  CHECK_THROWS_AS(steady_m(p1, 0.1, 1.5), std::domain_error);
  CHECK_THROWS_AS(steady_q(p1, 0.1), std::domain_error);
}

TEST_CASE("strict bound from the steady m") {
  for (double alpha : {0.6, 1.0}) {
    for (double rho : {0.5, 0.9}) {
      for (double delta : {0.0, 0.3, 2.0}) {
        const auto p = base_params(alpha, 2.0, rho);
        const double k = alpha * (delta + 1.0) * (delta + 1.0) / 2.0;
        const double m = steady_m(p, delta, steady_q(p, delta));
        CHECK(m * rho * k < 2.0);
      }
    }
  }
}

TEST_CASE("infinite-horizon root balances the estimator equation") {
  const auto p = base_params(1.0, 2.0, 0.9);
  const double root = solve_delta_infinite(p);
  CHECK(delta_balance(p, root) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("balance function is increasing") {
  const auto p = base_params(0.9, 2.0, 0.8);
  double prev = delta_balance(p, 0.0);
  for (double d = 0.1; d < 3.0; d += 0.1) {
    const double v = delta_balance(p, d);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("root agrees with the long-horizon fixed point from the steady age") {
  auto p = base_params(1.0, 2.0, 0.9);
  const double root = solve_delta_infinite(p);
  // start the finite-horizon run at the limiting age so the discounted
  // average sees no initial transient
  p.a_init = root + p.a0;
  p.horizon = 10000;
  const auto plan = solve_delta_fixed_point(p);
  CHECK(std::fabs(plan.delta - root) < 2e-2);
}

TEST_CASE("no positive root is reported as an error") {
  // near-unit delay with strong discounting puts the balance above 1 at zero
  auto p = ZoneParams::make_uniform(1.0, 0.5, 0.99, 0.99, 0.0, 10);
  CHECK(delta_balance(p, 0.0) >= 1.0);
  CHECK_THROWS_AS(solve_delta_infinite(p), ConvergenceError);
}

TEST_CASE("constant-coefficient price converges to its analytic limit") {
  const auto p = base_params(1.0, 2.0, 0.9);
  const double root = solve_delta_infinite(p);
  const auto paths = price_infinite(p, root, 500);
  CHECK(paths.ea[0] == doctest::Approx(p.a_init).epsilon(1e-14));
  CHECK(std::fabs(paths.price[500] - p.b / (p.alpha * (root + 1.0))) < 1e-6);
  CHECK(paths.price_limit == doctest::Approx(p.b / (p.alpha * (root + 1.0))).epsilon(1e-12));
}

TEST_CASE("closed-form ages match the forward recursion") {
  auto p = base_params(0.9, 2.0, 0.85);
  p.a_init = 3.0;
  const double delta = 0.4;
  const auto paths = price_infinite(p, delta, 200);
  // forward recursion under the same prices
  double ea = p.a_init;
  for (int t = 0; t < 200; ++t) {
    ea = ea - delta * p.alpha * paths.price[t] / p.b + (1.0 - p.alpha * paths.price[t] / p.b);
  }
  CHECK(paths.ea[200] == doctest::Approx(ea).epsilon(1e-8));
}

TEST_CASE("gap is nonnegative, shrinking in T, growing in rho") {
  auto p = base_params(0.9, 2.0, 0.5);
  std::vector<double> gap10;
  for (double rho : {0.5, 0.7, 0.9}) {
    p.rho = rho;
    double prev_gap = -1.0;
    for (int T : {2, 5, 10, 20, 40, 60}) {
      const GapResult g = epsilon_gap(p, T);
      CHECK(g.gap >= -1e-9);
      if (T >= 10 && prev_gap >= 0.0) CHECK(g.gap <= prev_gap + 1e-12);
      if (T >= 10) prev_gap = g.gap;
    }
    gap10.push_back(epsilon_gap(p, 10).gap);
  }
  CHECK(gap10[0] < gap10[1]);
  CHECK(gap10[1] < gap10[2]);
}

TEST_CASE("solve_steady_state bundles consistent values") {
  const auto p = base_params(1.0, 2.0, 0.9);
  const SteadyState ss = solve_steady_state(p);
  CHECK(ss.q == doctest::Approx(steady_q(p, ss.delta_inf)).epsilon(1e-12));
  CHECK(ss.m == doctest::Approx(steady_m(p, ss.delta_inf, ss.q)).epsilon(1e-12));
  // at the root, the limiting age sits delta above the mean delay
  CHECK(ss.ea_limit == doctest::Approx(ss.delta_inf + p.a0).epsilon(1e-7));
}

TEST_SUITE_END();
