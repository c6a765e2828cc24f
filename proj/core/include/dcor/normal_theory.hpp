#pragma once

// Population distance dependence of a standard bivariate normal pair with
// correlation rho.
//
//   F(rho)  = 4 pi (rho asin rho + sqrt(1 - rho^2) - rho asin(rho/2) - sqrt(4 - rho^2) + 1)
//   V^2     = F(rho) / pi^2
//   R^2     = F(rho) / F(1)

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dcor/rng.hpp"

namespace dcor {

struct NormalCurvePoint {
  double rho = 0.0;
  double r2 = 0.0;
  double v2 = 0.0;
};

double normal_F(double rho);
double normal_r2(double rho);
double normal_v2(double rho);
NormalCurvePoint normal_curve_point(double rho);

// lim_{rho -> 0} R / |rho| = 1 / (2 sqrt(1 + pi/3 - sqrt 3)).
double normal_r_over_rho_limit();

// F(rho) by nested quadrature of F''(z) = 4 pi / sqrt(1 - z^2) - 2 pi / sqrt(1 - z^2/4),
// cross-checked against the single quadrature 4 pi int_0^rho (asin x - asin(x/2)) dx.
// Requires |rho| < 1. Throws AccuracyError if the two routes disagree.
double f_quadrature_oracle(double rho);

// One draw of a (X, Y) observation pair.
using PairGenerator = std::function<std::pair<std::vector<double>, std::vector<double>>(Rng&)>;

PairGenerator bivariate_normal_generator(double rho);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Monte Carlo estimate of
//   V^2 = E|X1-X2||Y1-Y2| + E|X1-X2| E|Y1-Y2| - 2 E|X1-X2||Y1-Y3|
// from `reps` independent kernel evaluations, with a batch-means standard
// error. Each kernel evaluation draws four observations so that the product
// term uses independent pairs.
MonteCarloEstimate population_dcov_mc(const PairGenerator& generator, std::size_t reps,
                                      std::uint64_t seed, std::size_t batches = 100);

}  // namespace dcor
