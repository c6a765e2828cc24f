#include "dcor/normal_theory.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dcor/errors.hpp"
#include "dcor/numerics.hpp"

namespace dcor {

namespace {

constexpr double kPi = std::numbers::pi;

void check_rho(double rho) {
  if (!(std::abs(rho) <= 1.0)) {
    std::ostringstream msg;
    msg << "correlation must lie in [-1, 1], got " << rho;
    throw DomainError(msg.str());
  }
}

// rho asin rho + sqrt(1 - rho^2) - rho asin(rho/2) - sqrt(4 - rho^2) + 1, for rho >= 0.
double bracket(double rho) {
  return rho * std::asin(rho) + std::sqrt(1.0 - rho * rho) - rho * std::asin(rho / 2.0) -
         std::sqrt(4.0 - rho * rho) + 1.0;
}

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double ss = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) ss += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(ss);
}

}  // namespace

double normal_F(double rho) {
  check_rho(rho);
  return 4.0 * kPi * bracket(std::abs(rho));
}

double normal_r2(double rho) {
  check_rho(rho);
  const double value = bracket(std::abs(rho)) / (1.0 + kPi / 3.0 - std::sqrt(3.0));
  return std::max(0.0, value);
}

double normal_v2(double rho) { return std::max(0.0, normal_F(rho)) / (kPi * kPi); }

NormalCurvePoint normal_curve_point(double rho) { return {rho, normal_r2(rho), normal_v2(rho)}; }

double normal_r_over_rho_limit() {
  return 1.0 / (2.0 * std::sqrt(1.0 + kPi / 3.0 - std::sqrt(3.0)));
}

double f_quadrature_oracle(double rho) {
  if (!(std::abs(rho) < 1.0)) {
    std::ostringstream msg;
    msg << "f_quadrature_oracle: requires |rho| < 1, got " << rho;
    throw DomainError(msg.str());
  }
  const double r = std::abs(rho);
  if (r == 0.0) return 0.0;

  auto second_derivative = [](double z) {
    return 4.0 * kPi / std::sqrt(1.0 - z * z) - 2.0 * kPi / std::sqrt(1.0 - z * z / 4.0);
  };
  auto first_derivative = [&](double x) {
    if (x <= 0.0) return 0.0;
    return quadrature_1d(second_derivative, 0.0, x, 1e-13);
  };
  const double nested = quadrature_1d(first_derivative, 0.0, r, 1e-11);

  auto integrand = [](double x) { return 4.0 * kPi * (std::asin(x) - std::asin(x / 2.0)); };
  const double single = quadrature_1d(integrand, 0.0, r, 1e-12);

  const double gap = std::abs(nested - single);
  if (gap > 1e-8 * std::max(1.0, std::abs(single))) {
    std::ostringstream msg;
    msg << "f_quadrature_oracle: nested and single quadrature disagree (" << nested << " vs "
        << single << ")";
    throw AccuracyError(msg.str(), nested, gap);
  }
  return nested;
}

PairGenerator bivariate_normal_generator(double rho) {
  check_rho(rho);
  const double c = std::sqrt(1.0 - rho * rho);
  return [rho, c](Rng& rng) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    return std::pair<std::vector<double>, std::vector<double>>{{z1}, {rho * z1 + c * z2}};
  };
}

MonteCarloEstimate population_dcov_mc(const PairGenerator& generator, std::size_t reps,
                                      std::uint64_t seed, std::size_t batches) {
  if (reps < 100) throw ConfigError("population_dcov_mc: need at least 100 replications");
  if (batches < 2 || batches > reps) {
    throw ConfigError("population_dcov_mc: batch count must lie in [2, reps]");
  }
  std::vector<double> batch_means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t begin = reps * b / batches;
    const std::size_t end = reps * (b + 1) / batches;
    Rng rng = rng_stream(seed, static_cast<std::uint64_t>(b));
    CompensatedSum sum;
    for (std::size_t i = begin; i < end; ++i) {
      const auto [x1, y1] = generator(rng);
      const auto [x2, y2] = generator(rng);
      const auto [x3, y3] = generator(rng);
      const auto [x4, y4] = generator(rng);
      const double dx12 = euclid(x1, x2);
      sum.add(dx12 * euclid(y1, y2) + dx12 * euclid(y3, y4) - 2.0 * dx12 * euclid(y1, y3));
    }
    batch_means[b] = sum.value() / static_cast<double>(end - begin);
  }

  // Batches differ in size by at most one; weight them equally.
  double mean = 0.0;
  for (double m : batch_means) mean += m;
  mean /= static_cast<double>(batches);
  double var = 0.0;
  for (double m : batch_means) var += (m - mean) * (m - mean);
  var /= static_cast<double>(batches - 1);
  return {mean, std::sqrt(var / static_cast<double>(batches))};
}

}  // namespace dcor
