#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fusionclust/bmt.hpp"
#include "fusionclust/fusion_path.hpp"
#include "fusionclust/mixture.hpp"
#include "fusionclust/population.hpp"

namespace {

using namespace fusionclust;

std::vector<double> uniform_sample(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

void BM_BuildMergePath(benchmark::State& state) {
  const auto sample = SortedSample::from_values(uniform_sample(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_merge_path(sample));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildMergePath)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity(benchmark::oNLogN);

void BM_SplitOracle(benchmark::State& state) {
  const auto sample = SortedSample::from_values(uniform_sample(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(split_sequence_oracle(sample));
  }
}
BENCHMARK(BM_SplitOracle)->Arg(100)->Arg(1000);

void BM_RunBmt(benchmark::State& state) {
  const MixtureModel m({Component(Normal{-2.0, 1.0}), Component(Normal{2.0, 1.0})}, {0.5, 0.5});
  const auto sample = SortedSample::from_values(fusionclust::sample(m, state.range(0), 1));
  BmtConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_bmt(sample, config));
  }
}
BENCHMARK(BM_RunBmt)->RangeMultiplier(10)->Range(1000, 100000);

void BM_TruncatedMean(benchmark::State& state) {
  const MixtureModel m({Component(Normal{-4.0, 1.0}), Component(Normal{4.0, 1.0})}, {0.3, 0.7});
  double l = -7.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(truncated_mean(m, l, 9.0));
    l = l < -1.0 ? l + 1e-3 : -7.0;
  }
}
BENCHMARK(BM_TruncatedMean);

void BM_PopulationSplit(benchmark::State& state) {
  const double p1 = static_cast<double>(state.range(0)) / 100.0;
  const MixtureModel m({Component(Normal{-4.0, 1.0}), Component(Normal{4.0, 1.0})},
                       {p1, 1.0 - p1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_population_split(m));
  }
}
BENCHMARK(BM_PopulationSplit)->Arg(50)->Arg(30)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
