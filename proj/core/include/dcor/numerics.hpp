#pragma once

// Special functions, small dense linear algebra and adaptive quadrature.
// Everything here is a pure function of its arguments.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace dcor {

// Dense row-major matrix. Square-only operations check their shape.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t order);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  Matrix transpose() const;
  // Largest absolute entry.
  double max_abs() const noexcept;
  // Frobenius norm.
  double norm() const noexcept;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// True when |m(i,j) - m(j,i)| <= rel_tol * max|m| for all i, j.
bool is_symmetric(const Matrix& m, double rel_tol = 1e-10);

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if ((sum_ < 0 ? -sum_ : sum_) >= (v < 0 ? -v : v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// ---- special functions ---------------------------------------------------

double gamma_fn(double x);
double log_gamma(double x);
double normal_cdf(double x);
double normal_quantile(double p);
// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);
// Upper tail P(chi2_df >= x).
double chi_square_sf(double x, int df);

// ---- linear algebra ------------------------------------------------------

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j pairs with values[j]
};

SymmetricEigen sym_eigen(const Matrix& m);

// Inverse symmetric square root of a positive definite matrix. Eigenvalues
// at or below 1e-10 * (largest eigenvalue) are treated as singular.
Matrix inv_sqrt(const Matrix& m);

// Lower-triangular L with m = L L^T.
Matrix cholesky(const Matrix& m);

// LU factorization with partial pivoting.
class LuDecomposition {
 public:
  explicit LuDecomposition(const Matrix& m);

  double determinant() const noexcept;
  std::size_t order() const noexcept { return lu_.rows(); }
  std::vector<double> solve(std::span<const double> rhs) const;
  Matrix solve(const Matrix& rhs) const;

 private:
  Matrix lu_;
  std::vector<std::size_t> pivots_;
  int sign_ = 1;
};

// Determinant and reusable solver in one factorization.
struct DetAndSolve {
  double determinant;
  LuDecomposition solver;
};

DetAndSolve det_and_solve(const Matrix& m);

// Sample covariance (divisor n - 1) of the columns of an n x d table.
Matrix sample_covariance(const Matrix& rows);

// ---- quadrature ----------------------------------------------------------

struct QuadratureOptions {
  double tolerance = 1e-10;          // absolute
  std::size_t max_subdivisions = 20000;
  std::size_t initial_intervals = 1;  // uniform pre-split of [a, b]
};

// Adaptive Gauss-Kronrod (7/15) integration. Throws AccuracyError carrying
// the best estimate when the subdivision budget runs out.
double quadrature_1d(const std::function<double(double)>& f, double a, double b,
                     const QuadratureOptions& options);
double quadrature_1d(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace dcor
