#include "dcor/dcov.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "dcor/errors.hpp"
#include "dcor/numerics.hpp"

namespace dcor {

double DcovResult::dcov() const { return std::sqrt(v2_xy); }
double DcovResult::dcor() const { return std::sqrt(r2); }

WeightConstant weight_constant(std::size_t d, double alpha) {
  if (d < 1) throw DomainError("weight_constant: dimension must be >= 1");
  if (!(alpha > 0.0 && alpha < 2.0)) {
    std::ostringstream msg;
    msg << "weight_constant: exponent must lie in (0, 2), got " << alpha;
    throw DomainError(msg.str());
  }
  const double dd = static_cast<double>(d);
  const double value = 2.0 * std::pow(std::numbers::pi, dd / 2.0) * gamma_fn(1.0 - alpha / 2.0) /
                       (alpha * std::pow(2.0, alpha) * gamma_fn((dd + alpha) / 2.0));
  return {d, alpha, value};
}

DistanceTerms distance_terms(const SampleMatrix& x, double alpha) {
  DistanceMatrix raw = pairwise_distances(x, alpha);
  CenteredDistanceMatrix centered = double_center(raw);
  return {std::move(raw), std::move(centered)};
}

namespace {

// Clamps roundoff-level negatives to zero; anything larger is a bug.
double clamp_nonnegative(double v, double scale, const char* what) {
  if (v >= 0.0) return v;
  const double tol = 1e-9 * std::max(1.0, scale);
  if (v >= -tol) return 0.0;
  std::ostringstream msg;
  msg << what << " is negative beyond roundoff (" << v << ", tolerance " << tol << ")";
  throw ConsistencyError(msg.str());
}

double mean_product(std::span<const double> a, std::span<const double> b) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < a.size(); ++i) sum.add(a[i] * b[i]);
  return sum.value() / static_cast<double>(a.size());
}

}  // namespace

DcovResult dcov_stats(const DistanceTerms& x, const DistanceTerms& y, double alpha) {
  const std::size_t n = x.raw.n();
  if (y.raw.n() != n) throw InputError("dcov_stats: samples have different sizes");
  if (n < 2) throw InputError("dcov_stats: need at least two observations");

  const auto& A = x.centered.A;
  const auto& B = y.centered.A;

  DcovResult r;
  r.n = n;
  r.alpha = alpha;
  r.s1 = mean_product(x.raw.values(), y.raw.values());
  r.s2 = x.centered.grand_mean * y.centered.grand_mean;
  r.s3 = mean_product(x.centered.row_means, y.centered.row_means);

  const double v2_xy = mean_product(A, B);
  const double v2_x = mean_product(A, A);
  const double v2_y = mean_product(B, B);
  r.v2_xy = clamp_nonnegative(v2_xy, r.s1, "distance covariance");
  r.v2_x = clamp_nonnegative(v2_x, mean_product(x.raw.values(), x.raw.values()),
                             "distance variance of X");
  r.v2_y = clamp_nonnegative(v2_y, mean_product(y.raw.values(), y.raw.values()),
                             "distance variance of Y");

  const double denom = r.v2_x * r.v2_y;
  r.r2 = denom > 0.0 ? std::min(1.0, r.v2_xy / std::sqrt(denom)) : 0.0;
  return r;
}

DcovResult dcov_stats(const SampleMatrix& x, const SampleMatrix& y, double alpha) {
  if (x.n() != y.n()) {
    std::ostringstream msg;
    msg << "dcov_stats: samples have different sizes (" << x.n() << " vs " << y.n() << ")";
    throw InputError(msg.str());
  }
  if (x.n() < 2) throw InputError("dcov_stats: need at least two observations");
  return dcov_stats(distance_terms(x, alpha), distance_terms(y, alpha), alpha);
}

SSums oracle_s_sums(const SampleMatrix& x, const SampleMatrix& y, double alpha) {
  if (x.n() != y.n()) throw InputError("oracle_s_sums: samples have different sizes");
  if (x.n() < 2) throw InputError("oracle_s_sums: need at least two observations");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("oracle_s_sums: exponent outside (0, 2]");

  const std::size_t n = x.n();
  auto dist = [alpha](std::span<const double> u, std::span<const double> v) {
    long double ss = 0.0L;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const long double diff = static_cast<long double>(u[j]) - v[j];
      ss += diff * diff;
    }
    return std::pow(static_cast<double>(ss), 0.5 * alpha);
  };

  long double s1 = 0.0L;
  long double sum_a = 0.0L;
  long double sum_b = 0.0L;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      const double a = dist(x.row(k), x.row(l));
      const double b = dist(y.row(k), y.row(l));
      s1 += static_cast<long double>(a) * b;
      sum_a += a;
      sum_b += b;
    }
  }
  long double s3 = 0.0L;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      const double a = dist(x.row(k), x.row(l));
      for (std::size_t m = 0; m < n; ++m) {
        s3 += static_cast<long double>(a) * dist(y.row(k), y.row(m));
      }
    }
  }
  const long double n2 = static_cast<long double>(n) * n;
  SSums out;
  out.s1 = static_cast<double>(s1 / n2);
  out.s2 = static_cast<double>((sum_a / n2) * (sum_b / n2));
  out.s3 = static_cast<double>(s3 / (n2 * n));
  return out;
}

// ---- characteristic-function oracle ------------------------------------------

namespace {

void require_ecf_inputs(const SampleMatrix& x, const SampleMatrix& y) {
  if (x.d() != 1 || y.d() != 1) {
    throw UnsupportedError("ecf_norm_oracle: only one-dimensional samples are supported");
  }
  if (x.n() != y.n()) throw InputError("ecf_norm_oracle: samples have different sizes");
  if (x.n() < 2 || x.n() > 6) {
    throw UnsupportedError("ecf_norm_oracle: sample size must lie in [2, 6]");
  }
}

std::vector<double> column_values(const SampleMatrix& s) {
  std::vector<double> v(s.n());
  for (std::size_t k = 0; k < s.n(); ++k) v[k] = s(k, 0);
  return v;
}

double max_spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

// Integrates f over [cutoff, 1/cutoff] with panels no wider than half the
// shortest oscillation period on the far part of the range.
double integrate_truncated(const std::function<double(double)>& f, double cutoff,
                           double max_frequency, double tol) {
  const double upper = 1.0 / cutoff;
  QuadratureOptions near;
  near.tolerance = 0.5 * tol;
  near.initial_intervals = 16;
  near.max_subdivisions = 200000;
  double total = 0.0;
  if (cutoff < 1.0) total += quadrature_1d(f, cutoff, 1.0, near);

  const double lo = std::max(1.0, cutoff);
  if (upper > lo) {
    QuadratureOptions far;
    far.tolerance = 0.5 * tol;
    const double half_period = max_frequency > 0.0 ? std::numbers::pi / max_frequency : upper;
    far.initial_intervals =
        static_cast<std::size_t>(std::ceil((upper - lo) / half_period)) + 1;
    far.max_subdivisions = 4 * far.initial_intervals + 200000;
    total += quadrature_1d(f, lo, upper, far);
  }
  return total;
}

}  // namespace

double ecf_integrand(const SampleMatrix& x, const SampleMatrix& y, double t, double s) {
  require_ecf_inputs(x, y);
  const std::size_t n = x.n();
  std::complex<double> joint{0.0, 0.0};
  std::complex<double> fx{0.0, 0.0};
  std::complex<double> fy{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const auto ex = std::polar(1.0, t * x(k, 0));
    const auto ey = std::polar(1.0, s * y(k, 0));
    joint += ex * ey;
    fx += ex;
    fy += ey;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto diff = joint * inv_n - (fx * inv_n) * (fy * inv_n);
  return std::norm(diff);
}

EcfOracleResult ecf_norm_oracle(const SampleMatrix& x, const SampleMatrix& y, double cutoff,
                                double tol, EcfQuadrature mode) {
  require_ecf_inputs(x, y);
  if (!(cutoff > 0.0 && cutoff < 1.0)) {
    throw DomainError("ecf_norm_oracle: cutoff must lie in (0, 1)");
  }
  if (!(tol > 0.0)) throw DomainError("ecf_norm_oracle: tolerance must be positive");

  const std::size_t n = x.n();
  const std::vector<double> xs = column_values(x);
  const std::vector<double> ys = column_values(y);
  const double fx_max = max_spread(xs);
  const double fy_max = max_spread(ys);
  const double inv_n = 1.0 / static_cast<double>(n);
  const double pi2 = std::numbers::pi * std::numbers::pi;

  // The integrand is invariant under (t, s) -> (-t, -s), so the full domain
  // is twice the half plane t > 0.
  const double outer_tol = 0.5 * tol * pi2;

  // c_k(t) = (e^{i t X_k} - mean_m e^{i t X_m}) / n; sum_k c_k(t) = 0.
  auto coefficients = [&](double t) {
    std::vector<std::complex<double>> c(n);
    std::complex<double> mean{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      c[k] = std::polar(1.0, t * xs[k]);
      mean += c[k];
    }
    mean *= inv_n;
    for (auto& ck : c) ck = (ck - mean) * inv_n;
    return c;
  };

  double half_plane = 0.0;
  if (mode == EcfQuadrature::separable) {
    // G(t) = int_{cutoff <= |s| <= 1/cutoff} |sum_k c_k(t) e^{i s Y_k}|^2 / s^2 ds
    //      = -sum_{k,m} Re(c_k conj(c_m)) K(Y_k - Y_m),
    // K(D) = 2 int_{cutoff}^{1/cutoff} (1 - cos(s D)) / s^2 ds.
    std::vector<double> kernel(n * n, 0.0);
    const double inner_tol = 1e-3 * tol;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t m = k + 1; m < n; ++m) {
        const double delta = std::abs(ys[k] - ys[m]);
        double value = 0.0;
        if (delta > 0.0) {
          auto f = [delta](double s) {
            const double h = 0.5 * s * delta;
            // 1 - cos(sD) = 2 sin^2(sD/2), stable near zero.
            const double sn = std::sin(h);
            return 2.0 * sn * sn / (s * s);
          };
          value = 2.0 * integrate_truncated(f, cutoff, delta, inner_tol);
        }
        kernel[k * n + m] = kernel[m * n + k] = value;
      }
    }
    auto marginal = [&](double t) {
      const auto c = coefficients(t);
      double g = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = k + 1; m < n; ++m) {
          g -= 2.0 * (c[k] * std::conj(c[m])).real() * kernel[k * n + m];
        }
      }
      return g / (t * t);
    };
    half_plane = integrate_truncated(marginal, cutoff, fx_max, outer_tol);
  } else {
    const double inner_tol = 1e-2 * tol;
    auto marginal = [&](double t) {
      const auto c = coefficients(t);
      auto inner = [&](double s) {
        std::complex<double> plus{0.0, 0.0};
        std::complex<double> minus{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
          const auto e = std::polar(1.0, s * ys[k]);
          plus += c[k] * e;
          minus += c[k] * std::conj(e);
        }
        return (std::norm(plus) + std::norm(minus)) / (s * s);
      };
      return integrate_truncated(inner, cutoff, fy_max, inner_tol) / (t * t);
    };
    half_plane = integrate_truncated(marginal, cutoff, fx_max, outer_tol);
  }

  EcfOracleResult out;
  out.value = 2.0 * half_plane / pi2;
  out.cutoff = cutoff;
  out.tolerance = tol;
  out.mode = mode;
  return out;
}

// ---- affine invariant and alpha = 2 variants -----------------------------------

namespace {

SampleMatrix whiten(const SampleMatrix& s, const char* which) {
  if (s.n() <= s.d()) {
    std::ostringstream msg;
    msg << "affine_dcor: sample " << which << " has n=" << s.n() << " <= dimension " << s.d()
        << "; its covariance is singular, reduce the dimension";
    throw SingularMatrixError(msg.str());
  }
  Matrix root;
  try {
    root = inv_sqrt(sample_covariance(s.matrix()));
  } catch (const SingularMatrixError& e) {
    std::ostringstream msg;
    msg << "affine_dcor: sample covariance of " << which
        << " is singular, reduce the dimension (" << e.what() << ")";
    throw SingularMatrixError(msg.str());
  }
  return SampleMatrix(s.matrix() * root);
}

}  // namespace

DcovResult affine_dcor(const SampleMatrix& x, const SampleMatrix& y) {
  if (x.n() != y.n()) throw InputError("affine_dcor: samples have different sizes");
  return dcov_stats(whiten(x, "X"), whiten(y, "Y"), 1.0);
}

PearsonCheck pearson_check(const SampleMatrix& x, const SampleMatrix& y) {
  if (x.d() != 1 || y.d() != 1) {
    throw UnsupportedError("pearson_check: only one-dimensional samples are supported");
  }
  if (x.n() != y.n()) throw InputError("pearson_check: samples have different sizes");
  const std::size_t n = x.n();
  if (n < 2) throw InputError("pearson_check: need at least two observations");

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x(k, 0);
    my += y(k, 0);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  CompensatedSum sxy;
  CompensatedSum sxx;
  CompensatedSum syy;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = x(k, 0) - mx;
    const double dy = y(k, 0) - my;
    sxy.add(dx * dy);
    sxx.add(dx * dx);
    syy.add(dy * dy);
  }
  if (!(sxx.value() > 0.0) || !(syy.value() > 0.0)) {
    throw DegenerateInputError("pearson_check: a sample is constant");
  }

  PearsonCheck out;
  out.pearson_abs = std::abs(sxy.value()) / std::sqrt(sxx.value() * syy.value());
  out.r_alpha2 = dcov_stats(x, y, 2.0).dcor();
  return out;
}

}  // namespace dcor
