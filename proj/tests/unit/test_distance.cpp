#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dcor/distance.hpp"
#include "dcor/errors.hpp"
#include "helpers.hpp"

using namespace dcor;
using testing_support::random_orthogonal;
using testing_support::random_sample;

TEST_CASE("sample matrix validation") {
  CHECK_THROWS_AS(SampleMatrix(0, 1, {}), InputError);
  CHECK_THROWS_AS(SampleMatrix(1, 0, {}), InputError);
  CHECK_THROWS_AS(SampleMatrix(2, 1, {1.0, std::nan("")}), InputError);
  CHECK_THROWS_AS(SampleMatrix(2, 1, {1.0, std::numeric_limits<double>::infinity()}), InputError);
  const std::vector<double> v{1, 2, 3};
  const auto s = SampleMatrix::column(v);
  CHECK(s.n() == 3);
  CHECK(s.d() == 1);
  const std::vector<std::size_t> perm{2, 0, 1};
  const auto p = s.permuted_rows(perm);
  CHECK(p(0, 0) == 3);
  CHECK(p(1, 0) == 1);
}

TEST_CASE("distance matrix examples") {
  const std::vector<double> pts{0, 3, 4};
  const auto d = pairwise_distances(SampleMatrix::column(pts), 1.0);
  CHECK(d(0, 1) == 3);
  CHECK(d(0, 2) == 4);
  CHECK(d(1, 2) == 1);
  CHECK(d(2, 1) == 1);
  CHECK(d(1, 1) == 0);

  const std::vector<double> two{0, 3};
  CHECK(pairwise_distances(SampleMatrix::column(two), 2.0)(0, 1) == 9);

  const SampleMatrix same(2, 3, {1, 2, 3, 1, 2, 3});
  CHECK(pairwise_distances(same)(0, 1) == 0);

  const SampleMatrix planar(2, 2, {0, 0, 3, 4});
  CHECK(pairwise_distances(planar, 1.0)(0, 1) == doctest::Approx(5.0));
  CHECK(pairwise_distances(planar, 0.5)(0, 1) == doctest::Approx(std::sqrt(5.0)));
  CHECK(pairwise_distances(planar, 1.5)(0, 1) == doctest::Approx(std::pow(5.0, 1.5)));

  CHECK_THROWS_AS(pairwise_distances(planar, 0.0), DomainError);
  CHECK_THROWS_AS(pairwise_distances(planar, 2.5), DomainError);
  CHECK_THROWS_AS(DistanceMatrix(2, {0, 1, 2, 0}), InputError);
}

TEST_CASE("distance matrix invariants") {
  Rng rng(21);
  const auto x = random_sample(rng, 12, 3);
  const auto d = pairwise_distances(x, 1.0);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(d(i, i) == 0);
    for (std::size_t j = 0; j < 12; ++j) {
      CHECK(d(i, j) == d(j, i));
      CHECK(d(i, j) >= 0);
      for (std::size_t k = 0; k < 12; ++k) CHECK(d(i, k) <= d(i, j) + d(j, k) + 1e-12);
    }
  }

  std::vector<std::size_t> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(std::span<std::size_t>(perm));
  const auto dp = pairwise_distances(x.permuted_rows(perm), 1.0);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) CHECK(dp(i, j) == d(perm[i], perm[j]));
  }

  const dcor::Matrix c = random_orthogonal(rng, 3);
  const auto moved = testing_support::transform(x, {1.0, -2.0, 0.5}, -2.5, c);
  const auto dm = pairwise_distances(moved, 1.0);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) {
      CHECK(dm(i, j) == doctest::Approx(2.5 * d(i, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("double centering") {
  const auto zero = double_center(DistanceMatrix(3, std::vector<double>(9, 0.0)));
  for (double a : zero.A) CHECK(a == 0);

  const double c = 7.0;
  const auto two = double_center(DistanceMatrix(2, {0, c, c, 0}));
  CHECK(two(0, 0) == doctest::Approx(-c / 2));
  CHECK(two(0, 1) == doctest::Approx(c / 2));
  CHECK(two(1, 0) == doctest::Approx(c / 2));
  CHECK(two(1, 1) == doctest::Approx(-c / 2));
  CHECK(two.grand_mean == doctest::Approx(c / 2));

  Rng rng(4);
  const auto d = pairwise_distances(random_sample(rng, 5, 2), 1.0);
  const auto cd = double_center(d);
  for (std::size_t k = 0; k < 5; ++k) {
    double row = 0;
    double col = 0;
    for (std::size_t l = 0; l < 5; ++l) {
      row += cd(k, l);
      col += cd(l, k);
      CHECK(cd(k, l) == doctest::Approx(cd(l, k)).epsilon(1e-14));
      const double direct = d(k, l) - cd.row_means[k] - cd.col_means[l] + cd.grand_mean;
      CHECK(cd(k, l) == doctest::Approx(direct));
    }
    CHECK(std::abs(row) <= 1e-9 * 5 * cd.grand_mean);
    CHECK(std::abs(col) <= 1e-9 * 5 * cd.grand_mean);
  }

  // Centering an already centered matrix leaves it unchanged.
  const auto twice = double_center(DistanceMatrix(5, cd.A));
  for (std::size_t i = 0; i < 25; ++i) CHECK(twice.A[i] == doctest::Approx(cd.A[i]).epsilon(1e-12));
}
