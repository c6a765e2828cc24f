#include "dcor/distance.hpp"

#include <cmath>
#include <sstream>

#include "dcor/errors.hpp"

namespace dcor {

SampleMatrix::SampleMatrix(std::size_t n, std::size_t d, std::vector<double> row_major)
    : values_(n, d, std::move(row_major)) {
  validate();
}

SampleMatrix::SampleMatrix(Matrix values) : values_(std::move(values)) { validate(); }

SampleMatrix SampleMatrix::column(std::span<const double> values) {
  return SampleMatrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

void SampleMatrix::validate() const {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw InputError("sample must have at least one observation and one dimension");
  }
  for (std::size_t k = 0; k < values_.rows(); ++k) {
    for (std::size_t j = 0; j < values_.cols(); ++j) {
      if (!std::isfinite(values_(k, j))) {
        std::ostringstream msg;
        msg << "sample value at row " << k << ", column " << j << " is not finite";
        throw InputError(msg.str());
      }
    }
  }
}

SampleMatrix SampleMatrix::permuted_rows(std::span<const std::size_t> perm) const {
  if (perm.size() != n()) throw InputError("permutation length does not match sample size");
  Matrix out(n(), d());
  for (std::size_t k = 0; k < n(); ++k) {
    const auto src = row(perm[k]);
    auto dst = out.row(k);
    for (std::size_t j = 0; j < d(); ++j) dst[j] = src[j];
  }
  return SampleMatrix(std::move(out));
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), a_(std::move(entries)) {
  if (a_.size() != n_ * n_) throw InputError("distance matrix size does not match its order");
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t l = k; l < n_; ++l) {
      if (!std::isfinite(a_[k * n_ + l]) || a_[k * n_ + l] != a_[l * n_ + k]) {
        std::ostringstream msg;
        msg << "distance matrix is not finite and symmetric at (" << k << ", " << l << ")";
        throw InputError(msg.str());
      }
    }
  }
}

DistanceMatrix pairwise_distances(const SampleMatrix& x, double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    std::ostringstream msg;
    msg << "distance exponent must lie in (0, 2], got " << alpha;
    throw DomainError(msg.str());
  }
  const std::size_t n = x.n();
  const std::size_t d = x.d();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto xk = x.row(k);
    for (std::size_t l = k + 1; l < n; ++l) {
      const auto xl = x.row(l);
      double squared;
      if (d == 1) {
        const double diff = xk[0] - xl[0];
        squared = diff * diff;
      } else {
        CompensatedSum ss;
        for (std::size_t j = 0; j < d; ++j) {
          const double diff = xk[j] - xl[j];
          ss.add(diff * diff);
        }
        squared = ss.value();
      }
      double dist;
      if (alpha == 2.0) {
        dist = squared;
      } else if (alpha == 1.0) {
        dist = std::sqrt(squared);
      } else {
        dist = std::pow(squared, 0.5 * alpha);
      }
      a[k * n + l] = dist;
      a[l * n + k] = dist;
    }
  }
  return DistanceMatrix(n, std::move(a));
}

CenteredDistanceMatrix double_center(const DistanceMatrix& dm) {
  const std::size_t n = dm.n();
  CenteredDistanceMatrix out;
  out.n = n;
  out.A.assign(n * n, 0.0);
  out.row_means.assign(n, 0.0);
  out.col_means.assign(n, 0.0);
  if (n == 0) return out;

  const double inv_n = 1.0 / static_cast<double>(n);
  CompensatedSum grand;
  for (std::size_t k = 0; k < n; ++k) {
    CompensatedSum row;
    for (std::size_t l = 0; l < n; ++l) row.add(dm(k, l));
    out.row_means[k] = row.value() * inv_n;
    grand.add(row.value());
  }
  for (std::size_t l = 0; l < n; ++l) {
    CompensatedSum col;
    for (std::size_t k = 0; k < n; ++k) col.add(dm(k, l));
    out.col_means[l] = col.value() * inv_n;
  }
  out.grand_mean = grand.value() * inv_n * inv_n;

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      out.A[k * n + l] = dm(k, l) - (out.row_means[k] + out.col_means[l]) + out.grand_mean;
    }
  }
  return out;
}

}  // namespace dcor
