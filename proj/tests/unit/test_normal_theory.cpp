#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dcor/dcov.hpp"
#include "dcor/errors.hpp"
#include "dcor/normal_theory.hpp"

using namespace dcor;

namespace {

constexpr double pi = std::numbers::pi;

// Closed-form F, written out independently of the library.
double closed_F(double r) {
  r = std::abs(r);
  return 4 * pi *
         (r * std::asin(r) + std::sqrt(1 - r * r) - r * std::asin(r / 2) - std::sqrt(4 - r * r) + 1);
}

}  // namespace

TEST_CASE("closed forms") {
  CHECK(normal_r2(0.0) == 0.0);
  CHECK(std::abs(normal_r2(1.0) - 1.0) <= 1e-12);
  CHECK(normal_v2(0.0) == 0.0);
  CHECK(normal_v2(1.0) == doctest::Approx(4 * (1 + pi / 3 - std::sqrt(3.0)) / pi).epsilon(1e-13));
  CHECK(normal_F(1.0) == doctest::Approx(4 * pi * (1 + pi / 3 - std::sqrt(3.0))).epsilon(1e-13));
  CHECK(normal_r_over_rho_limit() ==
        doctest::Approx(1 / (2 * std::sqrt(1 + pi / 3 - std::sqrt(3.0)))).epsilon(1e-14));
  CHECK(std::abs(normal_r_over_rho_limit() - 0.89066) < 1e-5);
  CHECK(std::abs(std::sqrt(normal_r2(0.001)) / 0.001 - 0.89066) < 1e-4);
  CHECK_THROWS_AS(normal_r2(1.01), DomainError);
  CHECK_THROWS_AS(normal_v2(-1.5), DomainError);

  for (double r : {0.1, 0.37, 0.8}) {
    CHECK(normal_F(r) == doctest::Approx(closed_F(r)).epsilon(1e-13));
    CHECK(normal_r2(-r) == normal_r2(r));
    const auto pt = normal_curve_point(r);
    CHECK(pt.r2 == normal_r2(r));
    CHECK(pt.v2 == normal_v2(r));
  }
}

TEST_CASE("quadrature oracle agrees with closed form") {
  CHECK(f_quadrature_oracle(0.0) == 0.0);
  CHECK(std::abs(f_quadrature_oracle(0.5) - closed_F(0.5)) <= 1e-8);
  CHECK(std::abs(f_quadrature_oracle(0.9) - closed_F(0.9)) <= 1e-7);
  CHECK(std::abs(f_quadrature_oracle(0.5) / (pi * pi) - normal_v2(0.5)) <= 1e-8);
  for (int i = 1; i <= 9; ++i) {
    const double r = i / 10.0;
    CHECK(std::abs(normal_r2(r) - f_quadrature_oracle(r) / closed_F(1.0)) <= 1e-7);
  }
  CHECK_THROWS_AS(f_quadrature_oracle(1.0), DomainError);
}

TEST_CASE("dependence curve shape") {
  double prev_ratio = 0.0;
  double min_ratio = 1e300;
  for (int i = -100; i <= 100; ++i) {
    const double r = i / 100.0;
    const double big_r = std::sqrt(normal_r2(r));
    CHECK(big_r <= std::abs(r) + 1e-15);
    CHECK(normal_r2(r) >= 0.0);
    if (i > 0) {
      const double ratio = big_r / r;
      CHECK(ratio >= prev_ratio - 1e-12);
      prev_ratio = ratio;
      min_ratio = std::min(min_ratio, ratio);
    }
  }
  // The smallest grid point is 0.01, so compare with the limit at a tolerance
  // matching the O(rho^2) approach.
  CHECK(std::abs(min_ratio - normal_r_over_rho_limit()) < 1e-4);
  CHECK(std::abs(std::sqrt(normal_r2(1e-4)) / 1e-4 - normal_r_over_rho_limit()) < 1e-6);
}

TEST_CASE("population Monte Carlo") {
  const auto zero = population_dcov_mc(bivariate_normal_generator(0.0), 200000, 1);
  CHECK(std::abs(zero.estimate) <= 3 * zero.std_error);

  const auto half = population_dcov_mc(bivariate_normal_generator(0.5), 200000, 2);
  CHECK(std::abs(half.estimate - normal_v2(0.5)) <= 3 * half.std_error);

  const auto one = population_dcov_mc(bivariate_normal_generator(1.0), 200000, 3);
  CHECK(std::abs(one.estimate - normal_v2(1.0)) <= 3 * one.std_error);

  const auto again = population_dcov_mc(bivariate_normal_generator(0.5), 200000, 2);
  CHECK(again.estimate == half.estimate);

  CHECK_THROWS_AS(population_dcov_mc(bivariate_normal_generator(0.5), 50, 1), ConfigError);
}

TEST_CASE("sample statistic approaches the population value") {
  Rng rng(99);
  const auto gen = bivariate_normal_generator(0.5);
  std::vector<double> xs;
  std::vector<double> ys;
  for (int k = 0; k < 1500; ++k) {
    auto [x, y] = gen(rng);
    xs.push_back(x[0]);
    ys.push_back(y[0]);
  }
  const double v2 = dcov_stats(SampleMatrix::column(xs), SampleMatrix::column(ys)).v2_xy;
  CHECK(std::abs(v2 - normal_v2(0.5)) / normal_v2(0.5) < 0.15);
}
