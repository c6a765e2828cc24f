#pragma once

// Determinant-ratio tests of independence between the column blocks of a
// dispersion matrix T = [[T11, T12], [T21, T22]]:
//
//   Wilks (covariance), Puri-Sen rank (Spearman) and Puri-Sen sign,
//
// all calibrated by Bartlett's approximation
//   -(n - (p + q + 3)/2) log det(I - T22^{-1} T21 T11^{-1} T12) ~ chi2(pq).

#include <cstddef>

#include "dcor/distance.hpp"
#include "dcor/inference.hpp"
#include "dcor/numerics.hpp"

namespace dcor {

enum class DispersionKind { covariance, spearman, sign };

struct DispersionDecomposition {
  Matrix t11;  // p x p
  Matrix t12;  // p x q
  Matrix t21;  // q x p
  Matrix t22;  // q x q
  DispersionKind kind = DispersionKind::covariance;

  std::size_t p() const noexcept { return t11.rows(); }
  std::size_t q() const noexcept { return t22.rows(); }
};

// Splits a (p + q) x (p + q) matrix into its blocks.
DispersionDecomposition split_dispersion(const Matrix& full, std::size_t p, DispersionKind kind);

DispersionDecomposition covariance_dispersion(const SampleMatrix& x, const SampleMatrix& y);
// Spearman correlations of the combined (p + q)-variate sample, average ranks for ties.
DispersionDecomposition spearman_dispersion(const SampleMatrix& x, const SampleMatrix& y);
// (1/n) sum_j sign(Z_jk - med_k) sign(Z_jm - med_m) on the combined sample.
DispersionDecomposition sign_dispersion(const SampleMatrix& x, const SampleMatrix& y);

// Average ranks (1-based) of a sequence.
std::vector<double> average_ranks(std::span<const double> values);
// Midpoint of the central order statistics for even length.
double sample_median(std::span<const double> values);

// det(I - T22^{-1} T21 T11^{-1} T12). Throws SingularMatrixError for singular
// marginal blocks and DegenerateInputError when the result is not positive.
double independence_determinant(const DispersionDecomposition& decomp);

// W = -n log det(I - S22^{-1} S21 S11^{-1} S12) on sample covariances.
double wilks_statistic(const SampleMatrix& x, const SampleMatrix& y);

struct BartlettResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

BartlettResult bartlett_pvalue(const DispersionDecomposition& decomp, std::size_t n);

DispersionDecomposition dispersion(DispersionKind kind, const SampleMatrix& x,
                                   const SampleMatrix& y);

// Bartlett-calibrated test; method must be wilks, spearman or sign.
TestResult classical_test(TestMethod method, const SampleMatrix& x, const SampleMatrix& y,
                          double alpha = 0.1);

}  // namespace dcor
