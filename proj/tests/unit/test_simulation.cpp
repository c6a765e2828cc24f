#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dcor/dcov.hpp"
#include "dcor/errors.hpp"
#include "dcor/simulation.hpp"

using namespace dcor;

namespace {

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i;
    else ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double e : v) s += e;
  return s / v.size();
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> column_of(const SampleMatrix& s, std::size_t j) {
  std::vector<double> v(s.n());
  for (std::size_t k = 0; k < s.n(); ++k) v[k] = s(k, j);
  return v;
}

}  // namespace

TEST_CASE("random streams") {
  Rng a = rng_stream(5, 3);
  Rng b = rng_stream(5, 3);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());

  Rng s0 = rng_stream(5, 0);
  Rng s1 = rng_stream(5, 1);
  std::vector<double> u0(10000);
  std::vector<double> u1(10000);
  for (auto& v : u0) v = s0.uniform();
  for (auto& v : u1) v = s1.uniform();
  // Critical value of the two-sample KS statistic at level 0.001.
  CHECK(ks_two_sample(u0, u1) < 1.95 * std::sqrt(2.0 / 10000));

  Rng m = rng_stream(9, {1, 2, 3});
  Rng m2 = rng_stream(9, {1, 2, 3});
  Rng m3 = rng_stream(9, {1, 3, 2});
  CHECK(m.next() == m2.next());
  CHECK(m2.next() != m3.next());

  Rng u = rng_stream(2007, 0);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    CHECK_UNARY(v >= 0.0 && v < 1.0);
    sum += v;
  }
  CHECK(std::abs(sum / 100000 - 0.5) < 0.005);

  Rng g(17);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[g.uniform_index(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);

  double chi_mean = 0;
  for (int i = 0; i < 50000; ++i) chi_mean += g.chi_square(3.0);
  CHECK(chi_mean / 50000 == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("alternative validation") {
  AlternativeSpec bad{AlternativeKind::mvn_cross, 5, 5, 0.25};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  AlternativeSpec ok{AlternativeKind::mvn_cross, 5, 5, 0.19};
  CHECK_NOTHROW(ok.validate());
  AlternativeSpec mismatched{AlternativeKind::mult_noise, 5, 4};
  CHECK_THROWS_AS(mismatched.validate(), ConfigError);
  AlternativeSpec low_df{AlternativeKind::mvt_cross, 2, 2, 0.0, 0.5};
  CHECK_THROWS_AS(low_df.validate(), ConfigError);
  CHECK(parse_alternative_kind("log_square") == AlternativeKind::log_square);
  CHECK_FALSE(parse_alternative_kind("nope").has_value());
  CHECK(to_string(AlternativeKind::mvt_cross) == "mvt_cross");
}

TEST_CASE("multivariate normal cross design") {
  Rng rng = rng_stream(1, 0);
  const std::size_t n = 10000;
  const auto data = gen_alternative({AlternativeKind::mvn_cross, 5, 5, 0.1}, n, rng);
  CHECK(data.x.n() == n);
  CHECK(data.y.d() == 5);
  const double band = 3.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < 5; ++i) {
    const auto xi = column_of(data.x, i);
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(std::abs(pearson(xi, column_of(data.y, j)) - 0.1) < band);
    }
  }

  Rng big = rng_stream(1, 1);
  const auto marg = gen_alternative({AlternativeKind::mvn_cross, 2, 2, 0.3}, 100000, big);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto c = column_of(marg.y, j);
    const double m = mean_of(c);
    double var = 0;
    for (double v : c) var += (v - m) * (v - m);
    var /= c.size() - 1;
    CHECK(std::abs(m) < 3 * std::sqrt(1.0 / 1e5));
    CHECK(std::abs(var - 1.0) < 3 * std::sqrt(2.0 / 1e5));
  }
}

TEST_CASE("log-square design is uncorrelated but dependent") {
  Rng rng = rng_stream(2, 0);
  const auto data = gen_alternative({AlternativeKind::log_square, 1, 1}, 10000, rng);
  CHECK(std::abs(pearson(column_of(data.x, 0), column_of(data.y, 0))) < 3.0 / std::sqrt(1e4));
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(data.y(k, 0) == doctest::Approx(std::log(data.x(k, 0) * data.x(k, 0))));
  }
  Rng small = rng_stream(2, 1);
  const auto sub = gen_alternative({AlternativeKind::log_square, 1, 1}, 1000, small);
  CHECK(dcov_stats(sub.x, sub.y).dcor() > 0.2);
}

TEST_CASE("multiplicative noise and t designs") {
  Rng rng = rng_stream(3, 0);
  const auto data = gen_alternative({AlternativeKind::mult_noise, 3, 3}, 5000, rng);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(std::abs(pearson(column_of(data.x, j), column_of(data.y, j))) < 3.0 / std::sqrt(5000.0));
  }
  Rng trng = rng_stream(3, 1);
  const auto t = gen_alternative({AlternativeKind::mvt_cross, 2, 2, 0.0, 1.0}, 20000, trng);
  // Cauchy marginals: a quarter of the mass lies beyond |x| = 1 on each side.
  const auto c = column_of(t.x, 0);
  const double above = std::count_if(c.begin(), c.end(), [](double v) { return v > 1.0; });
  CHECK(std::abs(above / c.size() - 0.25) < 0.015);
}

TEST_CASE("study runner") {
  StudyConfig cfg;
  cfg.alternative = {AlternativeKind::mvn_cross, 2, 2, 0.0};
  cfg.n_grid = {20, 30};
  cfg.num_tests = 200;
  cfg.replicates = 99;
  cfg.seed = 5;
  const auto one = run_study(cfg);
  cfg.workers = 3;
  const auto three = run_study(cfg);
  REQUIRE(one.rows.size() == 8);
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].rejection_rate == three.rows[i].rejection_rate);
    CHECK(one.rows[i].rejection_rate >= 0.0);
    CHECK(one.rows[i].rejection_rate <= 1.0);
    CHECK(one.rows[i].mc_std_error ==
          doctest::Approx(mc_std_error(one.rows[i].rejection_rate, 200)));
  }
  CHECK(one.row(20, TestMethod::permutation).replicates == 99);
  CHECK(one.row(20, TestMethod::wilks).replicates == 0);
  CHECK_THROWS(one.row(25, TestMethod::wilks));

  cfg.num_tests = 50;
  CHECK_THROWS_AS(run_study(cfg), ConfigError);

  CHECK(mc_std_error(0.1, 2000) == doctest::Approx(std::sqrt(0.09 / 2000)));
}

TEST_CASE("study presets") {
  const auto grid = study_n_grid(200);
  CHECK(grid.front() == 25);
  CHECK(grid.size() == 26 + 10 + 10);
  CHECK(grid.back() == 200);
  CHECK(std::is_sorted(grid.begin(), grid.end()));

  const auto p = find_preset("table1a-n25");
  REQUIRE(p.has_value());
  CHECK(p->n_grid == std::vector<std::size_t>{25});
  CHECK(p->alternative.kind == AlternativeKind::mvn_cross);
  CHECK(find_preset("example1").has_value());
  CHECK(find_preset("example3")->alternative.kind == AlternativeKind::log_square);
  CHECK(find_preset("example2")->alternative.kind == AlternativeKind::mult_noise);
  CHECK_FALSE(find_preset("missing").has_value());
  CHECK(study_presets().size() >= 8);
}
