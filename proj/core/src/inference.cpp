#include "dcor/inference.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <thread>

#include "dcor/errors.hpp"
#include "dcor/numerics.hpp"
#include "dcor/rng.hpp"

namespace dcor {

std::string_view to_string(TestMethod method) {
  switch (method) {
    case TestMethod::permutation: return "dcov-perm";
    case TestMethod::asymptotic: return "dcov-asymptotic";
    case TestMethod::wilks: return "wilks";
    case TestMethod::spearman: return "spearman";
    case TestMethod::sign: return "sign";
  }
  return "unknown";
}

double test_statistic(const SampleMatrix& x, const SampleMatrix& y) {
  const DcovResult r = dcov_stats(x, y, 1.0);
  if (!(r.s2 > 0.0)) {
    throw DegenerateInputError("test statistic undefined: S2 = 0 (a sample is constant)");
  }
  return static_cast<double>(r.n) * r.v2_xy / r.s2;
}

std::size_t auto_replicates(std::size_t n) {
  if (n == 0) throw ConfigError("auto_replicates: sample size must be positive");
  return 200 + 5000 / n;
}

PermutationEngine::PermutationEngine(const SampleMatrix& x, const SampleMatrix& y) : n_(x.n()) {
  if (x.n() != y.n()) throw InputError("permutation test: samples have different sizes");
  if (n_ < 2) throw InputError("permutation test: need at least two observations");
  DistanceTerms tx = distance_terms(x, 1.0);
  DistanceTerms ty = distance_terms(y, 1.0);
  s2_ = tx.centered.grand_mean * ty.centered.grand_mean;
  if (!(s2_ > 0.0)) {
    throw DegenerateInputError("permutation test undefined: S2 = 0 (a sample is constant)");
  }
  a_ = std::move(tx.centered.A);
  b_ = std::move(ty.centered.A);
}

double PermutationEngine::permuted_statistic(const std::vector<std::size_t>& perm) const {
  CompensatedSum sum;
  for (std::size_t k = 0; k < n_; ++k) {
    const double* arow = a_.data() + k * n_;
    const double* brow = b_.data() + perm[k] * n_;
    for (std::size_t l = 0; l < n_; ++l) sum.add(arow[l] * brow[perm[l]]);
  }
  return sum.value() / static_cast<double>(n_);
}

double PermutationEngine::observed_statistic() const {
  std::vector<std::size_t> identity(n_);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  return permuted_statistic(identity);
}

namespace {

void check_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "significance level must lie in (0, 1), got " << alpha;
    throw ConfigError(msg.str());
  }
}

}  // namespace

TestResult permutation_test(const SampleMatrix& x, const SampleMatrix& y,
                            const PermutationOptions& options) {
  check_level(options.alpha);
  const PermutationEngine engine(x, y);
  const std::size_t n = engine.n();
  const std::size_t replicates = options.replicates.value_or(auto_replicates(n));
  if (replicates < 1) throw ConfigError("permutation test: replicates must be >= 1");

  const double observed = engine.observed_statistic();
  const double scale = options.statistic == PermutationStatistic::normalized ? engine.s2() : 1.0;
  const double t0 = observed / scale;

  auto count_range = [&](std::size_t begin, std::size_t end) {
    std::size_t count = 0;
    std::vector<std::size_t> perm(n);
    for (std::size_t b = begin; b < end; ++b) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      Rng rng = rng_stream(options.seed, static_cast<std::uint64_t>(b));
      rng.shuffle(std::span<std::size_t>(perm));
      if (engine.permuted_statistic(perm) / scale >= t0) ++count;
    }
    return count;
  };

  std::size_t exceed = 0;
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(replicates)));
  if (workers == 1) {
    exceed = count_range(0, replicates);
  } else {
    std::vector<std::size_t> counts(workers, 0);
    std::vector<std::thread> threads;
    const std::size_t chunk = (replicates + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(replicates, w * chunk);
      const std::size_t end = std::min(replicates, begin + chunk);
      threads.emplace_back([&, w, begin, end] { counts[w] = count_range(begin, end); });
    }
    for (auto& t : threads) t.join();
    exceed = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  }

  TestResult r;
  r.method = TestMethod::permutation;
  r.statistic = t0;
  r.alpha = options.alpha;
  r.replicates = replicates;
  r.seed = options.seed;
  r.p_value = static_cast<double>(1 + exceed) / static_cast<double>(replicates + 1);
  r.reject = *r.p_value <= options.alpha;
  return r;
}

double asymptotic_threshold(double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.215)) {
    std::ostringstream msg;
    msg << "asymptotic test is valid only for 0 < alpha <= 0.215, got " << alpha;
    throw DomainError(msg.str());
  }
  const double z = normal_quantile(1.0 - alpha / 2.0);
  return z * z;
}

TestResult asymptotic_test(const SampleMatrix& x, const SampleMatrix& y, double alpha) {
  const double threshold = asymptotic_threshold(alpha);
  TestResult r;
  r.method = TestMethod::asymptotic;
  r.statistic = test_statistic(x, y);
  r.alpha = alpha;
  r.threshold = threshold;
  r.reject = r.statistic > threshold;
  return r;
}

}  // namespace dcor
