#include <doctest.h>

#include <cmath>
#include <vector>

#include "aoi/errors.hpp"
#include "aoi/simulator.hpp"
#include "aoi/single_zone.hpp"

using namespace aoi;

TEST_SUITE_BEGIN("simulator");

TEST_CASE("zero prices never sample") {
  auto p = ZoneParams::make_uniform(0.9, 2.0, 0.9, 0.0, 1.0, 30);
  std::vector<double> zeros(31, 0.0);
  const auto roll = rollout(p, zeros, 7);
  for (int t = 0; t <= 30; ++t) {
    CHECK(roll.age[t] == doctest::Approx(1.0 + t).epsilon(1e-14));
    CHECK(roll.accepted[t] == 0);
  }
}

TEST_CASE("certain arrivals at the bound price reset every slot") {
  auto p = ZoneParams::make_uniform(1.0, 2.0, 0.9, 0.0, 4.0, 20);
  std::vector<double> maxp(21, 2.0);
  const auto roll = rollout(p, maxp, 3);
  for (int t = 1; t <= 20; ++t) {
    CHECK(roll.age[t] == 0.0);
  }
}

TEST_CASE("identical seeds reproduce the path bit for bit") {
  auto p = ZoneParams::make_uniform(0.95, 2.0, 0.5, 0.2, 0.0, 50);
  const auto plan = solve_delta_fixed_point(p);
  const auto a = rollout(p, plan.price, 1234);
  const auto b = rollout(p, plan.price, 1234);
  CHECK(a.cost == b.cost);
  for (int t = 0; t <= 50; ++t) {
    CHECK(a.age[t] == b.age[t]);
    CHECK(a.accepted[t] == b.accepted[t]);
  }
  const auto c = rollout(p, plan.price, 1235);
  bool any_diff = false;
  for (int t = 0; t <= 50; ++t) any_diff = any_diff || (a.age[t] != c.age[t]);
  CHECK(any_diff);
}

TEST_CASE("a single replication matches the raw rollout") {
  auto p = ZoneParams::make_uniform(0.95, 2.0, 0.9, 0.0, 0.0, 25);
  const auto plan = solve_delta_fixed_point(p);
  const auto roll = rollout(p, plan.price, 42);
  const auto stats = monte_carlo(p, plan.price, 1, 42);
  CHECK(stats.mean_cost == roll.cost);
  for (int t = 0; t <= 25; ++t) {
    CHECK(stats.mean_age[t] == roll.age[t]);
    CHECK(stats.stderr_age[t] == 0.0);
  }
}

TEST_CASE("second moments dominate squared means") {
  auto p = ZoneParams::make_uniform(0.9, 2.0, 0.9, 0.0, 0.0, 30);
  const auto plan = solve_delta_fixed_point(p);
  const auto stats = monte_carlo(p, plan.price, 500, 11);
  for (int t = 0; t <= 30; ++t) {
    CHECK(stats.mean_age_sq[t] + 1e-12 >= stats.mean_age[t] * stats.mean_age[t]);
  }
}

TEST_CASE("monte carlo is invariant to the worker count") {
  auto p = ZoneParams::make_uniform(0.9, 2.0, 0.9, 0.0, 0.0, 20);
  const auto plan = solve_delta_fixed_point(p);
  const auto s1 = monte_carlo(p, plan.price, 3000, 5, /*threads=*/1);
  const auto s4 = monte_carlo(p, plan.price, 3000, 5, /*threads=*/4);
  CHECK(s1.mean_cost == s4.mean_cost);
  for (int t = 0; t <= 20; ++t) {
    CHECK(s1.mean_age[t] == s4.mean_age[t]);
    CHECK(s1.accept_count[t] == s4.accept_count[t]);
  }
}

TEST_CASE("sample means track the nonlinear recursion at four sigma") {
  auto p = ZoneParams::make_uniform(1.0, 2.0, 0.9, 0.0, 0.0, 30);
  const auto plan = solve_delta_fixed_point(p);
  const auto expected = age_path_original(p, plan.price);
  const auto stats = monte_carlo(p, plan.price, 4000, 2024);
  for (int t = 0; t <= 30; ++t) {
    const double tolerance = 4.0 * stats.stderr_age[t] + 1e-12;
    CHECK(std::fabs(stats.mean_age[t] - expected[t]) <= tolerance);
  }
}

TEST_CASE("uniform delays leave the mean age unchanged") {
  auto p = ZoneParams::make_uniform(1.0, 2.0, 0.5, 0.4, 0.0, 25);
  const auto plan = solve_delta_fixed_point(p);
  const auto expected = age_path_original(p, plan.price);
  const auto stats = monte_carlo(p, plan.price, 20000, 77, 0, DelayModel::kUniform);
  for (int t = 0; t <= 25; ++t) {
    CHECK(std::fabs(stats.mean_age[t] - expected[t]) <= 4.0 * stats.stderr_age[t] + 1e-12);
  }
}

TEST_CASE("oracle at horizon one matches a fine one-dimensional scan") {
  auto p = ZoneParams::make_uniform(1.0, 2.0, 0.5, 0.0, 0.0, 1);
  std::vector<double> comparison(2, 0.0);
  const auto result = exhaustive_oracle(p, 0.05, comparison);

  double best_cost = 1e300, best_price = 0.0;
  for (double x = 0.0; x <= 2.0 + 1e-12; x += 0.0005) {
    const double ea1 = -(0.0 - p.a0) * p.alpha * x / p.b + (1.0 - p.alpha * x / p.b);
    const double c = p.alpha * x * x / p.b + p.rho * ea1 * ea1;
    if (c < best_cost) {
      best_cost = c;
      best_price = x;
    }
  }
  CHECK(result.best_price[0] == doctest::Approx(best_price).epsilon(0.051));
  CHECK(result.best_cost <= best_cost + 1e-9);
  CHECK(result.best_cost >= best_cost - 0.01);
}

TEST_CASE("the comparison sequence bounds the oracle from above") {
  auto p = ZoneParams::make_uniform(1.0, 2.0, 0.5, 0.0, 0.0, 4);
  const auto plan = solve_delta_fixed_point(p);
  const auto result = exhaustive_oracle(p, 0.1, plan.price);
  CHECK(result.gap >= 0.0);
  CHECK(result.best_cost <= result.comparison_cost);

  // degenerate grid: a comparison that is already optimal wins ties
  std::vector<double> idle(5, 0.0);
  const auto idle_result = exhaustive_oracle(p, 2.0, idle);
  CHECK(idle_result.best_cost <= idle_result.comparison_cost);
}

TEST_CASE("oracle result is independent of the worker count") {
  auto p = ZoneParams::make_uniform(1.0, 2.0, 0.5, 0.0, 0.0, 4);
  const auto plan = solve_delta_fixed_point(p);
  const auto r1 = exhaustive_oracle(p, 0.1, plan.price, 1e8, 1);
  const auto r4 = exhaustive_oracle(p, 0.1, plan.price, 1e8, 4);
  CHECK(r1.best_cost == r4.best_cost);
  for (std::size_t t = 0; t < r1.best_price.size(); ++t) {
    CHECK(r1.best_price[t] == r4.best_price[t]);
  }
}

TEST_CASE("candidate guard trips on oversized searches") {
  auto p = ZoneParams::make_uniform(1.0, 2.0, 0.5, 0.0, 0.0, 12);
  std::vector<double> comparison(13, 0.0);
  CHECK_THROWS_AS(exhaustive_oracle(p, 0.01, comparison), ResourceLimitError);
}

TEST_CASE("price validation") {
  auto p = ZoneParams::make_uniform(1.0, 2.0, 0.5, 0.0, 0.0, 3);
  std::vector<double> wrong_len(3, 0.0);
  CHECK_THROWS_AS(rollout(p, wrong_len, 1), ValidationError);
  std::vector<double> out_of_range{0.0, 2.5, 0.0, 0.0};
  CHECK_THROWS_AS(rollout(p, out_of_range, 1), ValidationError);
  CHECK_THROWS_AS(monte_carlo(p, std::vector<double>(4, 0.0), 0, 1), ValidationError);
}

TEST_SUITE_END();
