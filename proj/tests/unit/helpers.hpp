#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dcor/distance.hpp"
#include "dcor/numerics.hpp"
#include "dcor/rng.hpp"

namespace testing_support {

inline dcor::SampleMatrix random_sample(dcor::Rng& rng, std::size_t n, std::size_t d) {
  std::vector<double> v(n * d);
  for (double& e : v) e = rng.normal();
  return dcor::SampleMatrix(n, d, std::move(v));
}

inline dcor::Matrix random_symmetric(dcor::Rng& rng, std::size_t k) {
  dcor::Matrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.normal();
  }
  return m;
}

inline dcor::Matrix random_orthogonal(dcor::Rng& rng, std::size_t k) {
  return dcor::sym_eigen(random_symmetric(rng, k)).vectors;
}

inline dcor::Matrix random_spd(dcor::Rng& rng, std::size_t k) {
  dcor::Matrix g(k, k);
  for (double& e : g.values()) e = rng.normal();
  return g * g.transpose() + static_cast<double>(k) * dcor::Matrix::identity(k);
}

// x -> shift + scale * x * c, row by row.
inline dcor::SampleMatrix transform(const dcor::SampleMatrix& x, const std::vector<double>& shift,
                                    double scale, const dcor::Matrix& c) {
  dcor::Matrix m = scale * (x.matrix() * c);
  for (std::size_t k = 0; k < m.rows(); ++k) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(k, j) += shift[j];
  }
  return dcor::SampleMatrix(std::move(m));
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace testing_support
