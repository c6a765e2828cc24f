#pragma once

// Data generation for the Monte Carlo experiments and the study runner that
// turns repeated tests into rejection-rate tables.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcor/distance.hpp"
#include "dcor/inference.hpp"
#include "dcor/rng.hpp"

namespace dcor {

enum class AlternativeKind {
  mvn_cross,   // (X, Y) normal, identity marginals, every cross covariance rho
  mvt_cross,   // t(df) version of mvn_cross
  mult_noise,  // Y_kj = X_kj * eps_kj
  log_square,  // Y_kj = log(X_kj^2)
};

// How mvt_cross scales the normal draw.
enum class TDivisor {
  per_coordinate,  // independent chi2(df) divisor per coordinate: t(df) marginals
  shared,          // one chi2(df) divisor per observation: multivariate t
};

struct AlternativeSpec {
  AlternativeKind kind = AlternativeKind::mvn_cross;
  std::size_t p = 5;
  std::size_t q = 5;
  double rho = 0.0;
  double df = 1.0;
  TDivisor divisor = TDivisor::per_coordinate;

  // Throws ConfigError when the parameters are invalid.
  void validate() const;
};

std::string_view to_string(AlternativeKind kind);
std::optional<AlternativeKind> parse_alternative_kind(std::string_view name);

struct SamplePair {
  SampleMatrix x;
  SampleMatrix y;
};

SamplePair gen_alternative(const AlternativeSpec& spec, std::size_t n, Rng& rng);

struct StudyConfig {
  AlternativeSpec alternative;
  std::vector<std::size_t> n_grid{25, 50, 100};
  std::vector<TestMethod> tests{TestMethod::permutation, TestMethod::wilks, TestMethod::sign,
                                TestMethod::spearman};
  double alpha = 0.1;
  std::size_t num_tests = 2000;
  std::uint64_t seed = 2007;
  std::optional<std::size_t> replicates;  // permutation B; unset: auto rule
  unsigned workers = 1;
};

struct PowerStudyRow {
  std::size_t n = 0;
  TestMethod test = TestMethod::permutation;
  double rejection_rate = 0.0;
  double mc_std_error = 0.0;
  std::size_t num_tests = 0;
  std::size_t replicates = 0;  // permutation B, 0 for other tests
};

struct PowerStudyReport {
  StudyConfig config;
  std::vector<PowerStudyRow> rows;

  const PowerStudyRow& row(std::size_t n, TestMethod test) const;
};

// Binomial standard error sqrt(r (1 - r) / num_tests).
double mc_std_error(double rate, std::size_t num_tests);

// Dataset i at sample size n uses stream (seed, {n, i, 0}); its permutation
// replicates use seed mix of (seed, {n, i, 1}). Reports do not depend on
// the worker count.
PowerStudyReport run_study(const StudyConfig& config);

// Named experiment configurations. A "-nNN" suffix restricts the grid to
// one sample size, e.g. "table1a-n25".
struct StudyPreset {
  std::string name;
  std::string description;
  AlternativeSpec alternative;
  std::vector<std::size_t> n_grid;
  std::vector<TestMethod> tests;
};

std::vector<StudyPreset> study_presets();
std::optional<StudyPreset> find_preset(std::string_view name);

// 25:50:1, 55:100:5, then 110:last:10.
std::vector<std::size_t> study_n_grid(std::size_t last);

}  // namespace dcor
