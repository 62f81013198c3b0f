#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "aoi/cost_model.hpp"
#include "aoi/rng.hpp"

using namespace aoi;

TEST_SUITE_BEGIN("cost_model");

TEST_CASE("uniform cdf is pi/b") {
  auto d = CostDistribution::uniform(2.0);
  CHECK(d.cdf(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.cdf(0.0) == 0.0);
  CHECK(d.cdf(2.0) == 1.0);
}

TEST_CASE("truncated normal endpoints") {
  auto d = CostDistribution::truncated_normal(0.5, 2.0, 2.0);
  CHECK(d.cdf(0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(d.cdf(2.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("linear cdf evaluates and clamps") {
  auto d = CostDistribution::linear(0.14, 0.54, 2.0);
  CHECK(d.cdf(1.0) == doctest::Approx(0.68).epsilon(1e-12));
  CHECK(d.cdf(2.0) == 1.0);  // 0.14 + 1.08 clamped
  auto neg = CostDistribution::linear(-0.5, 0.1, 2.0);
  CHECK(neg.cdf(0.0) == 0.0);
}

TEST_CASE("cdf domain errors") {
  auto d = CostDistribution::uniform(2.0);
  CHECK_THROWS_AS(d.cdf(-0.1), std::domain_error);
  CHECK_THROWS_AS(d.cdf(2.1), std::domain_error);
  CHECK_THROWS_AS(d.inverse_cdf(-0.1), std::domain_error);
  CHECK_THROWS_AS(d.inverse_cdf(1.1), std::domain_error);
}

TEST_CASE("inverse cdf basics") {
  CHECK(CostDistribution::uniform(2.0).inverse_cdf(0.25) == doctest::Approx(0.5));
  CHECK(CostDistribution::uniform(2.0).inverse_cdf(0.0) == 0.0);
  CHECK(CostDistribution::truncated_normal(0.5, 2.0, 2.0).inverse_cdf(0.0) ==
        doctest::Approx(0.0).epsilon(1e-9));
  CHECK(CostDistribution::linear(0.14, 0.54, 2.0).inverse_cdf(0.0) == 0.0);
}

TEST_CASE("truncated normal inverse agrees with cdf") {
  auto d = CostDistribution::truncated_normal(0.5, 2.0, 2.0);
  const double pi = d.inverse_cdf(0.5);
  CHECK(d.cdf(pi) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("linear inverse puts residual mass at the bound") {
  // saturates below 1 on [0, b]: everything above F(b) maps to b
  auto d = CostDistribution::linear(0.1, 0.2, 2.0);  // F(2) = 0.5
  CHECK(d.inverse_cdf(0.75) == doctest::Approx(2.0));
  CHECK(d.inverse_cdf(0.3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit recovers the reference truncated-normal approximation") {
  auto d = CostDistribution::truncated_normal(0.5, 2.0, 2.0);
  const auto fit = d.fit_linear();
  CHECK(fit.dist.a1() > 0.12);
  CHECK(fit.dist.a1() < 0.16);
  CHECK(fit.dist.a2() > 0.52);
  CHECK(fit.dist.a2() < 0.56);
  CHECK(fit.residual_norm == doctest::Approx(1.46).epsilon(0.07));
}

TEST_CASE("fit on uniform is exact") {
  const auto fit = CostDistribution::uniform(2.0).fit_linear();
  CHECK(fit.dist.a1() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fit.dist.a2() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.residual_norm == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("fit rejects linear input and tiny grids") {
  CHECK_THROWS_AS(CostDistribution::linear(0.1, 0.4, 2.0).fit_linear(),
                  std::invalid_argument);
  CHECK_THROWS_AS(CostDistribution::uniform(2.0).fit_linear(1), std::invalid_argument);
}

TEST_CASE("cdf is monotone for every variant") {
  const CostDistribution dists[] = {
      CostDistribution::uniform(2.0),
      CostDistribution::truncated_normal(0.5, 2.0, 2.0),
      CostDistribution::truncated_normal(1.5, 0.7, 2.0),
      CostDistribution::linear(0.14, 0.54, 2.0),
      CostDistribution::linear(-0.2, 0.8, 2.0),
  };
  SplitMix64 rng(11);
  for (const auto& d : dists) {
    for (int i = 0; i < 200; ++i) {
      double x = rng.next_double() * d.bound();
      double y = rng.next_double() * d.bound();
      if (x > y) std::swap(x, y);
      CHECK(d.cdf(x) <= d.cdf(y) + 1e-14);
    }
  }
}

TEST_CASE("inverse_cdf composes with cdf on the interior") {
  const CostDistribution dists[] = {
      CostDistribution::uniform(2.0),
      CostDistribution::truncated_normal(0.5, 2.0, 2.0),
  };
  SplitMix64 rng(12);
  for (const auto& d : dists) {
    for (int i = 0; i < 100; ++i) {
      const double pi = 0.05 + 0.9 * rng.next_double() * d.bound() / 2.0;
      CHECK(d.inverse_cdf(d.cdf(pi)) == doctest::Approx(pi).epsilon(1e-7));
    }
  }
}

TEST_SUITE_END();
