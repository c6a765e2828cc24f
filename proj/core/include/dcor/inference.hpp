#pragma once

// Independence tests built on n V_n^2: permutation calibration and the
// conservative asymptotic threshold (Phi^{-1}(1 - alpha/2))^2.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dcor/dcov.hpp"

namespace dcor {

enum class TestMethod { permutation, asymptotic, wilks, spearman, sign };

std::string_view to_string(TestMethod method);

struct TestResult {
  double statistic = 0.0;
  TestMethod method = TestMethod::permutation;
  std::optional<double> p_value;
  std::optional<double> threshold;
  double alpha = 0.1;
  bool reject = false;
  std::size_t replicates = 0;           // permutation only
  std::optional<std::uint64_t> seed;    // permutation only
};

// n V_n^2 / S2 with alpha = 1. Throws DegenerateInputError when S2 = 0.
double test_statistic(const SampleMatrix& x, const SampleMatrix& y);

// floor(200 + 5000 / n).
std::size_t auto_replicates(std::size_t n);

// Which statistic the permutation test reports. Decisions are identical
// because S2 does not change when Y is permuted.
enum class PermutationStatistic { normalized, raw };

struct PermutationOptions {
  double alpha = 0.1;
  std::optional<std::size_t> replicates;  // unset: auto_replicates(n)
  std::uint64_t seed = 0;
  PermutationStatistic statistic = PermutationStatistic::normalized;
  unsigned workers = 1;
};

// Centered distance matrices of one sample pair, reused across replicates.
class PermutationEngine {
 public:
  PermutationEngine(const SampleMatrix& x, const SampleMatrix& y);

  std::size_t n() const noexcept { return n_; }
  double s2() const noexcept { return s2_; }
  // n V_n^2 of (X, Y permuted by perm): sum_kl A_kl B_{perm(k) perm(l)} / n.
  double permuted_statistic(const std::vector<std::size_t>& perm) const;
  double observed_statistic() const;

 private:
  std::size_t n_;
  std::vector<double> a_;
  std::vector<double> b_;
  double s2_;
};

// Permutes the rows of Y with an independent substream per replicate
// (seed, replicate index). p = (1 + #{T_b >= T_0}) / (B + 1).
TestResult permutation_test(const SampleMatrix& x, const SampleMatrix& y,
                            const PermutationOptions& options = {});

// Rejects iff n V_n^2 / S2 > (Phi^{-1}(1 - alpha/2))^2; valid for
// 0 < alpha <= 0.215.
TestResult asymptotic_test(const SampleMatrix& x, const SampleMatrix& y, double alpha = 0.1);

double asymptotic_threshold(double alpha);

}  // namespace dcor
