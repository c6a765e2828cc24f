#pragma once

// Empirical distance covariance, variance and correlation.

#include <cstddef>

#include "dcor/distance.hpp"

namespace dcor {

// Sample statistics for one (X, Y) pair.
//
//   v2_xy = (1/n^2) sum_kl A_kl B_kl
//   r2    = v2_xy / sqrt(v2_x v2_y), or 0 when either variance vanishes
//   s1    = (1/n^2) sum_kl a_kl b_kl
//   s2    = a.. * b..
//   s3    = (1/n) sum_k a_k. b_k.
//
// and v2_xy = s1 + s2 - 2 s3 up to roundoff.
struct DcovResult {
  double v2_xy = 0.0;
  double v2_x = 0.0;
  double v2_y = 0.0;
  double r2 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  std::size_t n = 0;
  double alpha = 1.0;

  double dcov() const;  // sqrt(v2_xy)
  double dcor() const;  // sqrt(r2)
};

// C(d, alpha) = 2 pi^{d/2} Gamma(1 - alpha/2) / (alpha 2^alpha Gamma((d + alpha)/2)),
// the normalizing constant of the weight |t|^{-(d + alpha)}.
struct WeightConstant {
  std::size_t d = 0;
  double alpha = 1.0;
  double value = 0.0;
};

WeightConstant weight_constant(std::size_t d, double alpha);

// Raw and double-centered distances for one sample, reusable across
// statistics that share the sample.
struct DistanceTerms {
  DistanceMatrix raw;
  CenteredDistanceMatrix centered;
};

DistanceTerms distance_terms(const SampleMatrix& x, double alpha = 1.0);

DcovResult dcov_stats(const SampleMatrix& x, const SampleMatrix& y, double alpha = 1.0);
DcovResult dcov_stats(const DistanceTerms& x, const DistanceTerms& y, double alpha);

// S1, S2, S3 by literal double and triple sums over freshly computed
// distances; O(n^3). Never touches the centered matrices.
struct SSums {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double v2() const noexcept { return s1 + s2 - 2.0 * s3; }
};

SSums oracle_s_sums(const SampleMatrix& x, const SampleMatrix& y, double alpha = 1.0);

// Numerical evaluation of the weighted L2 distance between the joint
// empirical characteristic function and the product of the marginals, for
// 1-D samples, over {cutoff <= |t|, |s| <= 1/cutoff}.
enum class EcfQuadrature {
  // The s integral is split by linearity into one 1-D quadrature per
  // distinct |Y_k - Y_m|; the t integral runs on the resulting marginal.
  separable,
  // Both integrals evaluated directly on the integrand. Cost grows like
  // 1/cutoff^2; meant for cutoff >= 1e-3.
  direct,
};

struct EcfOracleResult {
  double value = 0.0;
  double cutoff = 0.0;
  double tolerance = 0.0;
  EcfQuadrature mode = EcfQuadrature::separable;
};

EcfOracleResult ecf_norm_oracle(const SampleMatrix& x, const SampleMatrix& y, double cutoff,
                                double tol, EcfQuadrature mode = EcfQuadrature::separable);

// |f_n(t, s) - f_n(t) g_n(s)|^2 for 1-D samples.
double ecf_integrand(const SampleMatrix& x, const SampleMatrix& y, double t, double s);

// Statistics of the whitened samples X S_X^{-1/2}, Y S_Y^{-1/2} with alpha = 1.
DcovResult affine_dcor(const SampleMatrix& x, const SampleMatrix& y);

// For 1-D samples: the alpha = 2 distance correlation and |Pearson r|.
// The two agree exactly in exact arithmetic.
struct PearsonCheck {
  double r_alpha2 = 0.0;
  double pearson_abs = 0.0;
};

PearsonCheck pearson_check(const SampleMatrix& x, const SampleMatrix& y);

}  // namespace dcor
