#pragma once

// Sample containers, pairwise distance matrices and double centering.

#include <cstddef>
#include <span>
#include <vector>

#include "dcor/numerics.hpp"

namespace dcor {

// n x d table of observations, one row per observation. All values finite.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(std::size_t n, std::size_t d, std::vector<double> row_major);
  explicit SampleMatrix(Matrix values);

  // Builds an n x 1 sample from a list of scalars.
  static SampleMatrix column(std::span<const double> values);

  std::size_t n() const noexcept { return values_.rows(); }
  std::size_t d() const noexcept { return values_.cols(); }

  double operator()(std::size_t k, std::size_t j) const noexcept { return values_(k, j); }
  std::span<const double> row(std::size_t k) const noexcept { return values_.row(k); }
  const Matrix& matrix() const noexcept { return values_; }

  // Rows reordered so that row k of the result is row perm[k] of this sample.
  SampleMatrix permuted_rows(std::span<const std::size_t> perm) const;

 private:
  void validate() const;
  Matrix values_;
};

// Symmetric n x n matrix of |X_k - X_l|^alpha with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix(std::size_t n, std::vector<double> entries);

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t k, std::size_t l) const noexcept { return a_[k * n_ + l]; }
  std::span<const double> row(std::size_t k) const noexcept { return {a_.data() + k * n_, n_}; }
  std::span<const double> values() const noexcept { return a_; }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

// A_kl = a_kl - row_mean_k - col_mean_l + grand_mean, with the means retained.
struct CenteredDistanceMatrix {
  std::size_t n = 0;
  std::vector<double> A;          // n x n, row-major
  std::vector<double> row_means;  // a-bar_{k.}
  std::vector<double> col_means;  // a-bar_{.l}
  double grand_mean = 0.0;        // a-bar_{..}

  double operator()(std::size_t k, std::size_t l) const noexcept { return A[k * n + l]; }
};

// Entry (k, l) is the Euclidean distance between rows k and l raised to
// alpha, for 0 < alpha <= 2.
DistanceMatrix pairwise_distances(const SampleMatrix& x, double alpha = 1.0);

CenteredDistanceMatrix double_center(const DistanceMatrix& dm);

}  // namespace dcor
