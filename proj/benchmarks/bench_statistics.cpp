#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "volclust/pattern_gen.hpp"
#include "volclust/soft_vca.hpp"
#include "volclust/toy_trainer.hpp"
#include "volclust/vcs.hpp"

using namespace volclust;

static void BM_Vcs(benchmark::State& state) {
  PatternSpec spec;
  spec.n_events = static_cast<std::size_t>(state.range(0));
  spec.n_errors = spec.n_events / 10;
  const auto stream = generate_pattern(spec);
  const auto set = disagreement_set(stream, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(vcs(set, period_of(stream)).vcs);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Vcs)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

static void BM_WeightedSoftT(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> t(n), w(n), r(n);
  for (auto& x : t) x = u(gen) * static_cast<double>(n);
  std::sort(t.begin(), t.end());
  for (auto& x : w) x = u(gen);
  for (auto& x : r) x = u(gen) * static_cast<double>(n);
  const double beta = SoftConfig{}.effective_beta(t);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_soft_t(t, w, r, beta).t_soft);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WeightedSoftT)->RangeMultiplier(4)->Range(1 << 8, 1 << 16)->Complexity();

static void BM_CombinedLoss(benchmark::State& state) {
  DriftSpec spec;
  spec.n_events = static_cast<std::size_t>(state.range(0));
  const auto data = generate_drift_dataset(spec);
  ToyModel model{{0.8, 0.4, 0.0, 0.0, -0.1}};
  TrainConfig config;
  std::size_t step = 0;
  for (auto _ : state) benchmark::DoNotOptimize(combined_loss(model, data, config, step++).total);
}
BENCHMARK(BM_CombinedLoss)->Arg(1000)->Arg(10000);
BENCHMARK_MAIN();
