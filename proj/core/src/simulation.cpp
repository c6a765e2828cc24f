#include "dcor/simulation.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "dcor/classical.hpp"
#include "dcor/errors.hpp"
#include "dcor/numerics.hpp"

namespace dcor {

std::string_view to_string(AlternativeKind kind) {
  switch (kind) {
    case AlternativeKind::mvn_cross: return "mvn_cross";
    case AlternativeKind::mvt_cross: return "mvt_cross";
    case AlternativeKind::mult_noise: return "mult_noise";
    case AlternativeKind::log_square: return "log_square";
  }
  return "unknown";
}

std::optional<AlternativeKind> parse_alternative_kind(std::string_view name) {
  for (auto kind : {AlternativeKind::mvn_cross, AlternativeKind::mvt_cross,
                    AlternativeKind::mult_noise, AlternativeKind::log_square}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

void AlternativeSpec::validate() const {
  if (p < 1 || q < 1) throw ConfigError("alternative: dimensions must be >= 1");
  switch (kind) {
    case AlternativeKind::mvt_cross:
      if (!(df >= 1.0)) {
        std::ostringstream msg;
        msg << "alternative: t degrees of freedom must be >= 1, got " << df;
        throw ConfigError(msg.str());
      }
      [[fallthrough]];
    case AlternativeKind::mvn_cross: {
      const double bound = std::abs(rho) * std::sqrt(static_cast<double>(p * q));
      if (!(bound < 1.0)) {
        std::ostringstream msg;
        msg << "alternative: block covariance is not positive definite (|rho| sqrt(pq) = "
            << bound << " >= 1)";
        throw ConfigError(msg.str());
      }
      break;
    }
    case AlternativeKind::mult_noise:
    case AlternativeKind::log_square:
      if (p != q) throw ConfigError("alternative: coordinatewise alternatives need q = p");
      break;
  }
}

namespace {

Matrix cross_covariance_factor(const AlternativeSpec& spec) {
  const std::size_t m = spec.p + spec.q;
  Matrix cov = Matrix::identity(m);
  for (std::size_t i = 0; i < spec.p; ++i) {
    for (std::size_t j = spec.p; j < m; ++j) cov(i, j) = cov(j, i) = spec.rho;
  }
  try {
    return cholesky(cov);
  } catch (const SingularMatrixError& e) {
    throw ConfigError(std::string("alternative: ") + e.what());
  }
}

}  // namespace

SamplePair gen_alternative(const AlternativeSpec& spec, std::size_t n, Rng& rng) {
  spec.validate();
  if (n < 2) throw ConfigError("gen_alternative: need n >= 2");
  const std::size_t p = spec.p;
  const std::size_t q = spec.q;
  Matrix x(n, p);
  Matrix y(n, q);

  switch (spec.kind) {
    case AlternativeKind::mvn_cross:
    case AlternativeKind::mvt_cross: {
      const Matrix l = cross_covariance_factor(spec);
      const std::size_t m = p + q;
      std::vector<double> z(m);
      std::vector<double> w(m);
      for (std::size_t k = 0; k < n; ++k) {
        for (double& v : z) v = rng.normal();
        for (std::size_t i = 0; i < m; ++i) {
          double s = 0.0;
          for (std::size_t j = 0; j <= i; ++j) s += l(i, j) * z[j];
          w[i] = s;
        }
        if (spec.kind == AlternativeKind::mvt_cross) {
          if (spec.divisor == TDivisor::shared) {
            const double scale = 1.0 / std::sqrt(rng.chi_square(spec.df) / spec.df);
            for (double& v : w) v *= scale;
          } else {
            for (double& v : w) v /= std::sqrt(rng.chi_square(spec.df) / spec.df);
          }
        }
        for (std::size_t j = 0; j < p; ++j) x(k, j) = w[j];
        for (std::size_t j = 0; j < q; ++j) y(k, j) = w[p + j];
      }
      break;
    }
    case AlternativeKind::mult_noise:
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < p; ++j) x(k, j) = rng.normal();
        for (std::size_t j = 0; j < p; ++j) y(k, j) = x(k, j) * rng.normal();
      }
      break;
    case AlternativeKind::log_square:
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < p; ++j) {
          double v;
          do {
            v = rng.normal();
          } while (v == 0.0);
          x(k, j) = v;
          y(k, j) = std::log(v * v);
        }
      }
      break;
  }
  return {SampleMatrix(std::move(x)), SampleMatrix(std::move(y))};
}

double mc_std_error(double rate, std::size_t num_tests) {
  if (num_tests == 0) return 0.0;
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(num_tests));
}

const PowerStudyRow& PowerStudyReport::row(std::size_t n, TestMethod test) const {
  for (const auto& r : rows) {
    if (r.n == n && r.test == test) return r;
  }
  std::ostringstream msg;
  msg << "report has no row for n=" << n << ", test=" << to_string(test);
  throw InputError(msg.str());
}

namespace {

bool run_one(TestMethod test, const SamplePair& data, const StudyConfig& config,
             std::uint64_t perm_seed) {
  switch (test) {
    case TestMethod::permutation: {
      PermutationOptions opt;
      opt.alpha = config.alpha;
      opt.replicates = config.replicates;
      opt.seed = perm_seed;
      opt.statistic = PermutationStatistic::raw;
      return permutation_test(data.x, data.y, opt).reject;
    }
    case TestMethod::asymptotic:
      return asymptotic_test(data.x, data.y, config.alpha).reject;
    case TestMethod::wilks:
    case TestMethod::spearman:
    case TestMethod::sign:
      return classical_test(test, data.x, data.y, config.alpha).reject;
  }
  return false;
}

}  // namespace

PowerStudyReport run_study(const StudyConfig& config) {
  config.alternative.validate();
  if (config.num_tests < 100) throw ConfigError("run_study: num_tests must be >= 100");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw ConfigError("run_study: alpha must lie in (0, 1)");
  }
  if (config.tests.empty()) throw ConfigError("run_study: no tests requested");
  if (config.n_grid.empty()) throw ConfigError("run_study: empty sample-size grid");
  if (config.replicates && *config.replicates < 1) {
    throw ConfigError("run_study: replicates must be >= 1");
  }

  PowerStudyReport report;
  report.config = config;
  const std::size_t num_test_kinds = config.tests.size();

  for (std::size_t n : config.n_grid) {
    if (n < 4) throw ConfigError("run_study: sample sizes must be >= 4");
    // rejections[i * kinds + t] for dataset i and test t.
    std::vector<unsigned char> rejections(config.num_tests * num_test_kinds, 0);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::string first_error;

    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= config.num_tests) return;
        std::size_t t = 0;
        try {
          Rng rng = rng_stream(config.seed, {n, i, 0});
          const SamplePair data = gen_alternative(config.alternative, n, rng);
          const std::uint64_t perm_seed = rng_stream(config.seed, {n, i, 1}).next();
          for (t = 0; t < num_test_kinds; ++t) {
            rejections[i * num_test_kinds + t] = run_one(config.tests[t], data, config, perm_seed);
          }
        } catch (const std::exception& e) {
          std::lock_guard lock(error_mutex);
          if (first_error.empty()) {
            std::ostringstream msg;
            msg << "run_study failed at n=" << n << ", dataset " << i;
            if (t < num_test_kinds) msg << ", test " << to_string(config.tests[t]);
            msg << ": " << e.what();
            first_error = msg.str();
          }
          next.store(config.num_tests);
          return;
        }
      }
    };

    const unsigned workers = std::max(1u, config.workers);
    if (workers == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (unsigned w = 0; w < workers; ++w) threads.emplace_back(worker);
      for (auto& th : threads) th.join();
    }
    if (!first_error.empty()) throw Error(first_error);

    for (std::size_t t = 0; t < num_test_kinds; ++t) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < config.num_tests; ++i) count += rejections[i * num_test_kinds + t];
      PowerStudyRow row;
      row.n = n;
      row.test = config.tests[t];
      row.num_tests = config.num_tests;
      row.rejection_rate = static_cast<double>(count) / static_cast<double>(config.num_tests);
      row.mc_std_error = mc_std_error(row.rejection_rate, config.num_tests);
      row.replicates = row.test == TestMethod::permutation
                           ? config.replicates.value_or(auto_replicates(n))
                           : 0;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::vector<std::size_t> study_n_grid(std::size_t last) {
  std::vector<std::size_t> grid;
  for (std::size_t n = 25; n <= 50; ++n) grid.push_back(n);
  for (std::size_t n = 55; n <= 100 && n <= last; n += 5) grid.push_back(n);
  for (std::size_t n = 110; n <= last; n += 10) grid.push_back(n);
  return grid;
}

std::vector<StudyPreset> study_presets() {
  const std::vector<std::size_t> table_grid{25, 30, 35, 50, 70, 100};
  const std::vector<TestMethod> table_tests{TestMethod::permutation, TestMethod::wilks,
                                            TestMethod::sign, TestMethod::spearman};
  auto mvn = [](double rho) {
    AlternativeSpec s;
    s.kind = AlternativeKind::mvn_cross;
    s.rho = rho;
    return s;
  };
  auto mvt = [](double rho, double df) {
    AlternativeSpec s;
    s.kind = AlternativeKind::mvt_cross;
    s.rho = rho;
    s.df = df;
    return s;
  };
  AlternativeSpec noise;
  noise.kind = AlternativeKind::mult_noise;
  AlternativeSpec logsq;
  logsq.kind = AlternativeKind::log_square;

  return {
      {"table1a", "Type-I error, multivariate normal, p = q = 5", mvn(0.0), table_grid, table_tests},
      {"table1b", "Type-I error, t(1) coordinates, p = q = 5", mvt(0.0, 1), table_grid, table_tests},
      {"table1c", "Type-I error, t(2) coordinates, p = q = 5", mvt(0.0, 2), table_grid, table_tests},
      {"table1d", "Type-I error, t(3) coordinates, p = q = 5", mvt(0.0, 3), table_grid, table_tests},
      {"example1a", "Power, normal cross-correlation rho = 0.1", mvn(0.1), study_n_grid(200),
       table_tests},
      {"example1b", "Power, t(1) cross-correlation rho = 0.1", mvt(0.1, 1), study_n_grid(200),
       table_tests},
      {"example1c", "Power, t(2) cross-correlation rho = 0.1", mvt(0.1, 2), study_n_grid(200),
       table_tests},
      {"example1d", "Power, t(3) cross-correlation rho = 0.1", mvt(0.1, 3), study_n_grid(200),
       table_tests},
      {"example2", "Power, Y = X * eps", noise, study_n_grid(240), table_tests},
      {"example3", "Power, Y = log(X^2)", logsq, study_n_grid(100), table_tests},
  };
}

std::optional<StudyPreset> find_preset(std::string_view name) {
  std::string_view base = name;
  std::optional<std::size_t> only_n;
  if (const auto pos = name.rfind("-n"); pos != std::string_view::npos) {
    const std::string_view digits = name.substr(pos + 2);
    if (!digits.empty() &&
        digits.find_first_not_of("0123456789") == std::string_view::npos) {
      only_n = static_cast<std::size_t>(std::stoul(std::string(digits)));
      base = name.substr(0, pos);
    }
  }
  // "example1" is shorthand for the normal case.
  if (base == "example1") base = "example1a";
  for (auto& preset : study_presets()) {
    if (preset.name == base) {
      if (only_n) {
        preset.n_grid = {*only_n};
        preset.name = std::string(name);
      }
      return preset;
    }
  }
  return std::nullopt;
}

}  // namespace dcor
