// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dcor/dcor.hpp"

using namespace dcor;

namespace {

SampleMatrix normal_sample(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<double> v(n * d);
  for (double& e : v) e = rng.normal();
  return SampleMatrix(n, d, std::move(v));
}

Matrix orthogonal(Rng& rng, std::size_t k) {
  Matrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.normal();
  }
  return sym_eigen(m).vectors;
}

SampleMatrix shift_scale_rotate(const SampleMatrix& x, Rng& rng, double scale, const Matrix& c) {
  Matrix m = scale * (x.matrix() * c);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const double a = 5 * rng.normal();
    for (std::size_t k = 0; k < m.rows(); ++k) m(k, j) += a;
  }
  return SampleMatrix(std::move(m));
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Check = std::function<Outcome()>;

Outcome criterion_identity() {
  Rng rng = rng_stream(101, 0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng.uniform_index(49);
    const std::size_t p = 1 + rng.uniform_index(5);
    const std::size_t q = 1 + rng.uniform_index(5);
    const double alpha = std::vector<double>{0.5, 1.0, 1.5}[i % 3];
    const auto x = normal_sample(rng, n, p);
    const auto y = normal_sample(rng, n, q);
    const auto st = dcov_stats(x, y, alpha);
    const auto s = oracle_s_sums(x, y, alpha);
    worst = std::max(worst, std::abs(st.v2_xy - s.v2()) / std::max(1.0, s.s1));
  }
  std::ostringstream d;
  d << "max |V2 - (S1+S2-2S3)| / max(1,S1) = " << worst << " (limit 1e-9, 100 instances)";
  return {worst <= 1e-9, d.str()};
}

Outcome criterion_ecf() {
  Rng rng = rng_stream(102, 0);
  bool ok = true;
  std::ostringstream d;
  for (std::size_t n : {2, 3, 4, 5}) {
    const auto x = normal_sample(rng, n, 1);
    const auto y = normal_sample(rng, n, 1);
    const double target = dcov_stats(x, y).v2_xy;
    double prev = 1e300;
    d << "n=" << n << " err:";
    for (double cutoff : {1e-2, 1e-3, 1e-4}) {
      const double err = std::abs(ecf_norm_oracle(x, y, cutoff, 1e-9).value - target);
      d << ' ' << err;
      ok = ok && err < prev;
      prev = err;
    }
    ok = ok && prev <= 1e-3;
    d << "; ";
  }
  d << "(need decreasing, final <= 1e-3)";
  return {ok, d.str()};
}

Outcome criterion_pearson() {
  Rng rng = rng_stream(103, 0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 5 + rng.uniform_index(96);
    const auto x = normal_sample(rng, n, 1);
    Matrix ym = normal_sample(rng, n, 1).matrix();
    const double w = rng.uniform() * 2 - 1;
    for (std::size_t k = 0; k < n; ++k) ym(k, 0) += w * x(k, 0);
    const auto c = pearson_check(x, SampleMatrix(ym));
    worst = std::max(worst, std::abs(c.r_alpha2 - c.pearson_abs));
  }
  std::ostringstream d;
  d << "max |R(alpha=2) - |r|| = " << worst << " (limit 1e-10, 50 pairs)";
  return {worst <= 1e-10, d.str()};
}

Outcome criterion_normal_closed_form() {
  const double at_one = std::abs(normal_r2(1.0) - 1.0);
  double worst_quad = 0.0;
  const double f1 = normal_F(1.0);
  for (int i = 1; i <= 9; ++i) {
    const double r = i / 10.0;
    worst_quad = std::max(worst_quad, std::abs(normal_r2(r) - f_quadrature_oracle(r) / f1));
  }
  const double ratio = std::sqrt(normal_r2(0.001)) / 0.001;
  bool bounded = true;
  for (int i = -100; i <= 100; ++i) {
    const double r = i / 100.0;
    bounded = bounded && std::sqrt(normal_r2(r)) <= std::abs(r) + 1e-15;
  }
  std::ostringstream d;
  d << "|R2(1)-1| = " << at_one << ", max quadrature gap = " << worst_quad
    << ", R(0.001)/0.001 = " << ratio << ", R <= |rho| on grid: " << (bounded ? "yes" : "no");
  const bool ok = at_one <= 1e-12 && worst_quad <= 1e-7 && std::abs(ratio - 0.89066) <= 1e-4 &&
                  bounded;
  return {ok, d.str()};
}

Outcome criterion_consistency() {
  const double target = normal_v2(0.5);
  const auto gen = bivariate_normal_generator(0.5);
  std::vector<double> estimates;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    Rng rng = rng_stream(105, rep);
    std::vector<double> xs;
    std::vector<double> ys;
    for (int k = 0; k < 2000; ++k) {
      auto [x, y] = gen(rng);
      xs.push_back(x[0]);
      ys.push_back(y[0]);
    }
    estimates.push_back(dcov_stats(SampleMatrix::column(xs), SampleMatrix::column(ys)).v2_xy);
  }
  std::nth_element(estimates.begin(), estimates.begin() + 10, estimates.end());
  const double upper = estimates[10];
  std::nth_element(estimates.begin(), estimates.begin() + 9, estimates.end());
  const double median = 0.5 * (estimates[9] + upper);
  const double rel = std::abs(median - target) / target;
  const auto mc = population_dcov_mc(gen, 200000, 105);
  const double z = std::abs(mc.estimate - target) / mc.std_error;
  std::ostringstream d;
  d << "target " << target << ", median sample V2 " << median << " (rel " << rel
    << ", limit 0.1); MC " << mc.estimate << " +- " << mc.std_error << " (|z| = " << z
    << ", limit 3)";
  return {rel <= 0.1 && z <= 3.0, d.str()};
}

PowerStudyReport preset_study(const std::string& name, std::vector<std::size_t> grid,
                              std::vector<TestMethod> tests, std::size_t num_tests) {
  const auto preset = find_preset(name);
  StudyConfig cfg;
  cfg.alternative = preset->alternative;
  cfg.n_grid = std::move(grid);
  cfg.tests = std::move(tests);
  cfg.num_tests = num_tests;
  cfg.seed = 2007;
  return run_study(cfg);
}

const std::vector<TestMethod> kTableTests{TestMethod::permutation, TestMethod::wilks,
                                          TestMethod::sign, TestMethod::spearman};

Outcome criterion_table_mvn() {
  const auto report = preset_study("table1a", {25}, kTableTests, 2000);
  const std::vector<std::pair<TestMethod, double>> expected{{TestMethod::permutation, 0.1039},
                                                            {TestMethod::wilks, 0.1089},
                                                            {TestMethod::sign, 0.1212},
                                                            {TestMethod::spearman, 0.1121}};
  bool ok = true;
  std::ostringstream d;
  for (const auto& [test, ref] : expected) {
    const auto& row = report.row(25, test);
    ok = ok && std::abs(row.rejection_rate - ref) <= 0.021;
    d << to_string(test) << ' ' << row.rejection_rate << " (ref " << ref << ") ";
  }
  d << "tolerance 0.021, B = " << report.row(25, TestMethod::permutation).replicates;
  return {ok, d.str()};
}

Outcome criterion_table_t() {
  const auto report =
      preset_study("table1b", {25}, {TestMethod::permutation, TestMethod::wilks}, 2000);
  const double v = report.row(25, TestMethod::permutation).rejection_rate;
  const double w = report.row(25, TestMethod::wilks).rejection_rate;
  std::ostringstream d;
  d << "dcov-perm " << v << " (ref 0.1010, tolerance 0.021), wilks " << w << " (need > 0.25)";
  return {std::abs(v - 0.1010) <= 0.021 && w > 0.25, d.str()};
}

Outcome criterion_asymptotic() {
  const auto report = preset_study("table1a", {100}, {TestMethod::asymptotic}, 2000);
  const double rate = report.row(100, TestMethod::asymptotic).rejection_rate;
  const double thr = asymptotic_threshold(0.1);
  const double z = normal_quantile(0.95);
  std::ostringstream d;
  d << "rejection rate " << rate << " (limit 0.12), threshold " << thr << " vs "
    << z * z;
  return {rate <= 0.12 && std::abs(thr - 2.705543) <= 1e-6 && std::abs(thr - z * z) <= 1e-12,
          d.str()};
}

Outcome criterion_power_shapes() {
  const std::size_t tests = 500;
  bool ok = true;
  std::ostringstream d;

  const auto ex2 = preset_study("example2", {25, 100}, kTableTests, tests);
  const auto gain = [&](TestMethod m) {
    return ex2.row(100, m).rejection_rate - ex2.row(25, m).rejection_rate;
  };
  const auto sigma = [&](TestMethod m) {
    const double a = ex2.row(25, m).mc_std_error;
    const double b = ex2.row(100, m).mc_std_error;
    return std::sqrt(a * a + b * b);
  };
  const double v_gain = gain(TestMethod::permutation);
  ok = ok && v_gain >= 0.2;
  d << "example2: dcov gain " << v_gain;
  for (auto m : {TestMethod::spearman, TestMethod::sign}) {
    const double g = gain(m);
    const double s = sigma(m);
    ok = ok && std::abs(g) <= 3 * s;
    d << ", " << to_string(m) << " change " << g << " (3 sigma " << 3 * s << ")";
  }

  const auto ex3 = preset_study("example3", {50}, kTableTests, tests);
  const double v = ex3.row(50, TestMethod::permutation).rejection_rate;
  d << "; example3 n=50: dcov " << v;
  for (auto m : {TestMethod::wilks, TestMethod::sign, TestMethod::spearman}) {
    const double r = ex3.row(50, m).rejection_rate;
    ok = ok && v - r >= 0.2;
    d << ", " << to_string(m) << ' ' << r;
  }
  return {ok, d.str()};
}

Outcome criterion_invariance() {
  Rng rng = rng_stream(110, 0);
  double group = 0.0;
  double scale = 0.0;
  double exact = 0.0;
  double affine = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 30;
    const std::size_t p = 1 + rng.uniform_index(4);
    const std::size_t q = 1 + rng.uniform_index(4);
    const auto x = normal_sample(rng, n, p);
    Matrix ym = normal_sample(rng, n, q).matrix();
    for (std::size_t k = 0; k < n; ++k) ym(k, 0) += x(k, 0) * x(k, 0);
    const SampleMatrix y(ym);
    const auto base = dcov_stats(x, y);

    const double bx = 0.1 + 3 * rng.uniform();
    const double by = -(0.1 + 3 * rng.uniform());
    const auto xt = shift_scale_rotate(x, rng, bx, orthogonal(rng, p));
    const auto yt = shift_scale_rotate(y, rng, by, orthogonal(rng, q));
    group = std::max(group, std::abs(std::sqrt(dcov_stats(xt, yt).r2) - std::sqrt(base.r2)));

    const double vx = std::sqrt(base.v2_x);
    const double vt = std::sqrt(dcov_stats(xt, xt).v2_xy);
    scale = std::max(scale, std::abs(vt - bx * vx) / (bx * vx));

    exact = std::max(exact, std::abs(dcov_stats(x, xt).dcor() - 1.0));

    const auto ab = affine_dcor(x, y);
    Matrix g(p, p);
    for (double& e : g.values()) e = rng.normal();
    Matrix xm = x.matrix() * g;
    for (std::size_t k = 0; k < n; ++k) xm(k, 0) += 2.0;
    Matrix h(q, q);
    for (double& e : h.values()) e = rng.normal();
    affine = std::max(affine, std::abs(affine_dcor(SampleMatrix(xm), SampleMatrix(y.matrix() * h)).r2 - ab.r2));
  }
  std::ostringstream d;
  d << "group " << group << ", scale " << scale << ", R(X, a+bXC)-1 " << exact << ", affine "
    << affine << " (limits 1e-9, 1e-9, 1e-9, 1e-8)";
  return {group <= 1e-9 && scale <= 1e-9 && exact <= 1e-9 && affine <= 1e-8, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Check>> criteria{
      {"1 algebraic identity", criterion_identity},
      {"2 characteristic-function quadrature", criterion_ecf},
      {"3 alpha=2 equals |Pearson r|", criterion_pearson},
      {"4 bivariate normal closed form", criterion_normal_closed_form},
      {"5 sample and Monte Carlo consistency", criterion_consistency},
      {"6 Type I error, normal null", criterion_table_mvn},
      {"7 Type I error, t(1) null", criterion_table_t},
      {"8 asymptotic test conservativeness", criterion_asymptotic},
      {"9 power curve shapes", criterion_power_shapes},
      {"10 invariance suite", criterion_invariance},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s: %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", name.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
