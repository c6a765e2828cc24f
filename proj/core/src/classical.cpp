#include "dcor/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dcor/errors.hpp"

namespace dcor {

namespace {

void check_pair(const SampleMatrix& x, const SampleMatrix& y, std::size_t min_n, const char* who) {
  if (x.n() != y.n()) {
    throw InputError(std::string(who) + ": samples have different sizes");
  }
  if (x.n() < min_n) {
    std::ostringstream msg;
    msg << who << ": need at least " << min_n << " observations, got " << x.n();
    throw InputError(msg.str());
  }
}

// Columns of X followed by columns of Y.
Matrix combined(const SampleMatrix& x, const SampleMatrix& y) {
  const std::size_t n = x.n();
  const std::size_t p = x.d();
  const std::size_t q = y.d();
  Matrix z(n, p + q);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < p; ++j) z(k, j) = x(k, j);
    for (std::size_t j = 0; j < q; ++j) z(k, p + j) = y(k, j);
  }
  return z;
}

std::vector<double> column(const Matrix& m, std::size_t c) {
  std::vector<double> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = m(r, c);
  return out;
}

}  // namespace

DispersionDecomposition split_dispersion(const Matrix& full, std::size_t p, DispersionKind kind) {
  if (!full.is_square() || p == 0 || p >= full.rows()) {
    throw InputError("split_dispersion: need a square matrix and 0 < p < order");
  }
  const std::size_t q = full.rows() - p;
  DispersionDecomposition d{Matrix(p, p), Matrix(p, q), Matrix(q, p), Matrix(q, q), kind};
  for (std::size_t i = 0; i < p + q; ++i) {
    for (std::size_t j = 0; j < p + q; ++j) {
      const double v = full(i, j);
      if (i < p && j < p) d.t11(i, j) = v;
      else if (i < p) d.t12(i, j - p) = v;
      else if (j < p) d.t21(i - p, j) = v;
      else d.t22(i - p, j - p) = v;
    }
  }
  return d;
}

DispersionDecomposition covariance_dispersion(const SampleMatrix& x, const SampleMatrix& y) {
  check_pair(x, y, 2, "covariance_dispersion");
  return split_dispersion(sample_covariance(combined(x, y)), x.d(), DispersionKind::covariance);
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 share the average of ranks i+1..j.
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

double sample_median(std::span<const double> values) {
  if (values.empty()) throw InputError("sample_median: empty input");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

DispersionDecomposition spearman_dispersion(const SampleMatrix& x, const SampleMatrix& y) {
  check_pair(x, y, 3, "spearman_dispersion");
  const Matrix z = combined(x, y);
  const std::size_t n = z.rows();
  const std::size_t m = z.cols();

  // Centered ranks per column.
  Matrix r(n, m);
  std::vector<double> norms(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    const std::vector<double> ranks = average_ranks(column(z, c));
    const double mean = 0.5 * static_cast<double>(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
      r(k, c) = ranks[k] - mean;
      norms[c] += r(k, c) * r(k, c);
    }
    if (!(norms[c] > 0.0)) {
      std::ostringstream msg;
      msg << "spearman_dispersion: column " << c
          << " of the combined sample is constant; rank correlation undefined";
      throw DegenerateInputError(msg.str());
    }
  }
  Matrix t(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    t(a, a) = 1.0;
    for (std::size_t b = a + 1; b < m; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += r(k, a) * r(k, b);
      t(a, b) = t(b, a) = s / std::sqrt(norms[a] * norms[b]);
    }
  }
  return split_dispersion(t, x.d(), DispersionKind::spearman);
}

DispersionDecomposition sign_dispersion(const SampleMatrix& x, const SampleMatrix& y) {
  check_pair(x, y, 3, "sign_dispersion");
  const Matrix z = combined(x, y);
  const std::size_t n = z.rows();
  const std::size_t m = z.cols();
  Matrix signs(n, m);
  for (std::size_t c = 0; c < m; ++c) {
    const std::vector<double> col = column(z, c);
    const double med = sample_median(col);
    for (std::size_t k = 0; k < n; ++k) {
      const double d = col[k] - med;
      signs(k, c) = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    }
  }
  Matrix t(m, m);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += signs(k, a) * signs(k, b);
      t(a, b) = t(b, a) = s * inv_n;
    }
  }
  return split_dispersion(t, x.d(), DispersionKind::sign);
}

double independence_determinant(const DispersionDecomposition& decomp) {
  const LuDecomposition lu11(decomp.t11);
  const LuDecomposition lu22(decomp.t22);
  const Matrix m = lu11.solve(decomp.t12);        // T11^{-1} T12
  const Matrix prod = lu22.solve(decomp.t21 * m);  // T22^{-1} T21 T11^{-1} T12
  const Matrix arg = Matrix::identity(decomp.q()) - prod;

  double det = 0.0;
  try {
    det = det_and_solve(arg).determinant;
  } catch (const SingularMatrixError&) {
    det = 0.0;
  }
  if (!(det > 1e-12)) {
    std::ostringstream msg;
    msg << "determinant ratio is " << det
        << "; the samples are (numerically) exact functions of each other";
    throw DegenerateInputError(msg.str());
  }
  return det;
}

double wilks_statistic(const SampleMatrix& x, const SampleMatrix& y) {
  check_pair(x, y, 2, "wilks_statistic");
  if (x.n() <= x.d() + y.d()) {
    std::ostringstream msg;
    msg << "wilks_statistic: need n > p + q, got n=" << x.n() << ", p+q=" << x.d() + y.d();
    throw InputError(msg.str());
  }
  const double det = independence_determinant(covariance_dispersion(x, y));
  return std::max(0.0, -static_cast<double>(x.n()) * std::log(det));
}

BartlettResult bartlett_pvalue(const DispersionDecomposition& decomp, std::size_t n) {
  const std::size_t p = decomp.p();
  const std::size_t q = decomp.q();
  if (n <= p + q) {
    std::ostringstream msg;
    msg << "bartlett_pvalue: need n > p + q, got n=" << n << ", p+q=" << p + q;
    throw InputError(msg.str());
  }
  const double det = independence_determinant(decomp);
  const double multiplier = static_cast<double>(n) - 0.5 * static_cast<double>(p + q + 3);
  BartlettResult r;
  r.statistic = std::max(0.0, -multiplier * std::log(det));
  r.p_value = chi_square_sf(r.statistic, static_cast<int>(p * q));
  return r;
}

DispersionDecomposition dispersion(DispersionKind kind, const SampleMatrix& x,
                                   const SampleMatrix& y) {
  switch (kind) {
    case DispersionKind::covariance: return covariance_dispersion(x, y);
    case DispersionKind::spearman: return spearman_dispersion(x, y);
    case DispersionKind::sign: return sign_dispersion(x, y);
  }
  throw ConfigError("unknown dispersion kind");
}

TestResult classical_test(TestMethod method, const SampleMatrix& x, const SampleMatrix& y,
                          double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("significance level must lie in (0, 1)");
  DispersionKind kind;
  switch (method) {
    case TestMethod::wilks: kind = DispersionKind::covariance; break;
    case TestMethod::spearman: kind = DispersionKind::spearman; break;
    case TestMethod::sign: kind = DispersionKind::sign; break;
    default: throw ConfigError("classical_test: method must be wilks, spearman or sign");
  }
  if (x.n() != y.n()) throw InputError("classical_test: samples have different sizes");
  const BartlettResult b = bartlett_pvalue(dispersion(kind, x, y), x.n());
  TestResult r;
  r.method = method;
  r.statistic = b.statistic;
  r.p_value = b.p_value;
  r.alpha = alpha;
  r.reject = b.p_value <= alpha;
  return r;
}

}  // namespace dcor
