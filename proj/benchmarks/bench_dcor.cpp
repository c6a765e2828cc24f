#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "dcor/dcor.hpp"

namespace {

dcor::SampleMatrix sample(std::size_t n, std::size_t d, std::uint64_t seed) {
  dcor::Rng rng(seed);
  std::vector<double> v(n * d);
  for (double& e : v) e = rng.normal();
  return dcor::SampleMatrix(n, d, std::move(v));
}

void BM_PairwiseDistances(benchmark::State& state) {
  const auto x = sample(static_cast<std::size_t>(state.range(0)), 5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dcor::pairwise_distances(x, 1.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PairwiseDistances)->RangeMultiplier(2)->Range(32, 1024)->Complexity(benchmark::oNSquared);

void BM_DcovStats(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = sample(n, 5, 2);
  const auto y = sample(n, 5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(dcor::dcov_stats(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DcovStats)->RangeMultiplier(2)->Range(32, 1024)->Complexity(benchmark::oNSquared);

void BM_PermutationReplicate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dcor::PermutationEngine engine(sample(n, 5, 4), sample(n, 5, 5));
  std::vector<std::size_t> perm(n);
  std::uint64_t b = 0;
  for (auto _ : state) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    dcor::Rng rng = dcor::rng_stream(7, b++);
    rng.shuffle(std::span<std::size_t>(perm));
    benchmark::DoNotOptimize(engine.permuted_statistic(perm));
  }
}
BENCHMARK(BM_PermutationReplicate)->Arg(25)->Arg(100)->Arg(400);

void BM_PermutationTest(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = sample(n, 5, 6);
  const auto y = sample(n, 5, 7);
  for (auto _ : state) benchmark::DoNotOptimize(dcor::permutation_test(x, y, {.seed = 1}));
}
BENCHMARK(BM_PermutationTest)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_BartlettTests(benchmark::State& state) {
  const auto x = sample(50, 5, 8);
  const auto y = sample(50, 5, 9);
  const auto method = static_cast<dcor::TestMethod>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dcor::classical_test(method, x, y, 0.1));
}
BENCHMARK(BM_BartlettTests)
    ->Arg(static_cast<int>(dcor::TestMethod::wilks))
    ->Arg(static_cast<int>(dcor::TestMethod::spearman))
    ->Arg(static_cast<int>(dcor::TestMethod::sign));

}  // namespace

BENCHMARK_MAIN();
