#include "dcor/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "dcor/errors.hpp"

namespace dcor {

// ---- Matrix ----------------------------------------------------------------

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) {
    throw InputError("matrix data size does not match its shape");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InputError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t order) {
  Matrix m(order, order);
  for (std::size_t i = 0; i < order; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::norm() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw InputError("matrix product shape mismatch");
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix sum shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw InputError("matrix difference shape mismatch");
  }
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix out = a;
  for (double& v : out.data_) v *= s;
  return out;
}

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (!m.is_square()) return false;
  const double tol = rel_tol * std::max(m.max_abs(), std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

// ---- special functions -----------------------------------------------------

namespace {

// Lanczos approximation, g = 7, nine coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double z) {
  // z is the shifted argument x - 1.
  double s = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) s += kLanczos[i] / (z + static_cast<double>(i));
  return s;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "gamma_fn: argument must be positive and finite, got " << x;
    throw DomainError(msg.str());
  }
  if (x < 0.5) {
    // Reflection keeps the Lanczos series in its accurate range.
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * half * std::exp(-t) * lanczos_sum(z);
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "log_gamma: argument must be positive and finite, got " << x;
    throw DomainError(msg.str());
  }
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(z));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "normal_quantile: probability must lie in (0, 1), got " << p;
    throw DomainError(msg.str());
  }
  // Wichura's AS 241 (PPND16).
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

namespace {

constexpr double kGammaEps = 1e-16;
constexpr int kGammaMaxIter = 10000;

// Series for P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kGammaMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) {
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw AccuracyError("incomplete gamma series did not converge", 0.0, 0.0);
}

// Continued fraction for Q(a, x) (modified Lentz), valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps) {
      return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
    }
  }
  throw AccuracyError("incomplete gamma continued fraction did not converge", 0.0, 0.0);
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    std::ostringstream msg;
    msg << "incomplete gamma: need a > 0 and x >= 0, got a=" << a << " x=" << x;
    throw DomainError(msg.str());
  }
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi_square_sf(double x, int df) {
  if (df < 1) {
    std::ostringstream msg;
    msg << "chi_square_sf: degrees of freedom must be >= 1, got " << df;
    throw DomainError(msg.str());
  }
  if (!(x >= 0.0)) {
    std::ostringstream msg;
    msg << "chi_square_sf: statistic must be nonnegative, got " << x;
    throw DomainError(msg.str());
  }
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

// ---- linear algebra ----------------------------------------------------------

namespace {

void require_square(const Matrix& m, const char* who) {
  if (!m.is_square() || m.rows() == 0) {
    throw InputError(std::string(who) + ": matrix must be square and nonempty");
  }
}

void require_symmetric(const Matrix& m, const char* who) {
  require_square(m, who);
  if (!is_symmetric(m, 1e-10)) {
    throw DomainError(std::string(who) + ": matrix is not symmetric");
  }
}

}  // namespace

SymmetricEigen sym_eigen(const Matrix& input) {
  require_symmetric(input, "sym_eigen");
  const std::size_t n = input.rows();
  Matrix a = input;
  // Symmetrize exactly so the rotations see a symmetric matrix.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  Matrix v = Matrix::identity(n);

  // Cyclic Jacobi rotations.
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += a(i, i) * a(i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off == 0.0 || off <= 1e-32 * diag) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return a(l, l) > a(r, r); });

  SymmetricEigen out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

Matrix inv_sqrt(const Matrix& m) {
  const SymmetricEigen eig = sym_eigen(m);
  const double largest = eig.values.front();
  const double cutoff = 1e-10 * std::max(largest, 0.0);
  for (double lambda : eig.values) {
    if (!(lambda > cutoff)) {
      std::ostringstream msg;
      msg << "inv_sqrt: matrix is not positive definite (eigenvalue " << lambda
          << " <= tolerance " << cutoff << ")";
      throw SingularMatrixError(msg.str());
    }
  }
  const std::size_t n = m.rows();
  Matrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = 1.0 / std::sqrt(eig.values[j]);
    for (std::size_t r = 0; r < n; ++r) {
      const double vr = eig.vectors(r, j) * w;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * eig.vectors(c, j);
    }
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c) out(r, c) = out(c, r) = 0.5 * (out(r, c) + out(c, r));
  return out;
}

Matrix cholesky(const Matrix& m) {
  require_symmetric(m, "cholesky");
  const std::size_t n = m.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) {
      std::ostringstream msg;
      msg << "cholesky: matrix is not positive definite (pivot " << d << " at column " << j
          << ")";
      throw SingularMatrixError(msg.str());
    }
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

LuDecomposition::LuDecomposition(const Matrix& m) : lu_(m), pivots_(m.rows()) {
  require_square(m, "det_and_solve");
  const std::size_t n = m.rows();
  const double scale = m.max_abs();
  const double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    }
    if (!(best > tol)) {
      std::ostringstream msg;
      msg << "det_and_solve: matrix is singular (pivot " << best << " at column " << k
          << " below tolerance " << tol << ")";
      throw SingularMatrixError(msg.str());
    }
    pivots_[k] = piv;
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(piv, c));
      sign_ = -sign_;
    }
    const double inv = 1.0 / lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu_(i, k) * inv;
      lu_(i, k) = f;
      if (f == 0.0) continue;
      for (std::size_t c = k + 1; c < n; ++c) lu_(i, c) -= f * lu_(k, c);
    }
  }
}

double LuDecomposition::determinant() const noexcept {
  double det = sign_;
  for (std::size_t i = 0; i < lu_.rows(); ++i) det *= lu_(i, i);
  return det;
}

std::vector<double> LuDecomposition::solve(std::span<const double> rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.size() != n) throw InputError("LU solve: right-hand side has wrong length");
  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t k = 0; k < n; ++k) std::swap(x[k], x[pivots_[k]]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) x[i] -= lu_(i, k) * x[k];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) x[i] -= lu_(i, k) * x[k];
    x[i] /= lu_(i, i);
  }
  return x;
}

Matrix LuDecomposition::solve(const Matrix& rhs) const {
  if (rhs.rows() != lu_.rows()) throw InputError("LU solve: right-hand side has wrong rows");
  Matrix out(rhs.rows(), rhs.cols());
  std::vector<double> col(rhs.rows());
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    for (std::size_t r = 0; r < rhs.rows(); ++r) col[r] = rhs(r, c);
    const std::vector<double> x = solve(std::span<const double>(col));
    for (std::size_t r = 0; r < rhs.rows(); ++r) out(r, c) = x[r];
  }
  return out;
}

DetAndSolve det_and_solve(const Matrix& m) {
  LuDecomposition lu(m);
  const double det = lu.determinant();
  return {det, std::move(lu)};
}

Matrix sample_covariance(const Matrix& rows) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  if (n < 2) throw InputError("sample_covariance: need at least two observations");
  std::vector<double> mean(d, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < d; ++j) mean[j] += rows(k, j);
  for (double& m : mean) m /= static_cast<double>(n);
  Matrix cov(d, d);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      const double di = rows(k, i) - mean[i];
      for (std::size_t j = i; j < d; ++j) cov(i, j) += di * (rows(k, j) - mean[j]);
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov(i, j) /= denom;
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

// ---- quadrature --------------------------------------------------------------

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights pair with the odd-indexed Kronrod nodes.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    throw DomainError("quadrature_1d: integrand is not finite on the interval");
  }
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

double quadrature_1d(const std::function<double(double)>& f, double a, double b,
                     const QuadratureOptions& options) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("quadrature_1d: need finite a < b");
  }
  if (!(options.tolerance > 0.0)) throw DomainError("quadrature_1d: tolerance must be positive");

  std::priority_queue<Segment> heap;
  const std::size_t pieces = std::max<std::size_t>(1, options.initial_intervals);
  const double width = (b - a) / static_cast<double>(pieces);
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double lo = a + width * static_cast<double>(i);
    const double hi = (i + 1 == pieces) ? b : a + width * static_cast<double>(i + 1);
    Segment s = gauss_kronrod(f, lo, hi);
    total += s.value;
    total_error += s.error;
    heap.push(s);
  }

  std::size_t subdivisions = 0;
  while (total_error > options.tolerance) {
    if (subdivisions >= options.max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature_1d: subdivision budget exhausted (estimate " << total
          << ", error estimate " << total_error << ", tolerance " << options.tolerance << ")";
      throw AccuracyError(msg.str(), total, total_error);
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::ostringstream msg;
      msg << "quadrature_1d: interval cannot be subdivided further (estimate " << total << ")";
      throw AccuracyError(msg.str(), total, total_error);
    }
    heap.pop();
    Segment left = gauss_kronrod(f, worst.a, mid);
    Segment right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;

    // Re-sum occasionally so drift in the running totals cannot accumulate.
    if (subdivisions % 256 == 0) {
      auto copy = heap;
      CompensatedSum v;
      CompensatedSum e;
      while (!copy.empty()) {
        v.add(copy.top().value);
        e.add(copy.top().error);
        copy.pop();
      }
      total = v.value();
      total_error = e.value();
    }
  }

  CompensatedSum v;
  while (!heap.empty()) {
    v.add(heap.top().value);
    heap.pop();
  }
  return v.value();
}

double quadrature_1d(const std::function<double(double)>& f, double a, double b, double tol) {
  QuadratureOptions options;
  options.tolerance = tol;
  return quadrature_1d(f, a, b, options);
}

}  // namespace dcor
