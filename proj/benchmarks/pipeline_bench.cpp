#include <benchmark/benchmark.h>

#include <random>

#include "lle/experiment.hpp"

namespace {

const char* const kSystems[] = {"logistic", "henon", "sine", "tent", "mackey-glass"};

void BM_SimulatePair(benchmark::State& state) {
  const auto spec = lle::make_system(kSystems[state.range(0)]);
  const auto backend = static_cast<lle::Backend>(state.range(1));
  const std::size_t steps = lle::default_steps(spec);
  for (auto _ : state) {
    auto pair = lle::simulate_pair(spec, spec.ic_range.lo, steps, {}, backend);
    benchmark::DoNotOptimize(pair.series_a.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(2 * steps));
  state.SetLabel(spec.name + (backend == lle::Backend::FpEnvironment ? " fenv" : " soft"));
}
BENCHMARK(BM_SimulatePair)->ArgsProduct({{0, 1, 2, 3, 4}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_RlsUpdate(benchmark::State& state) {
  const auto schedule = state.range(0) == 0 ? lle::LambdaSchedule::constant()
                                            : lle::LambdaSchedule::inverse_k();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> y(200);
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = 0.7 * static_cast<double>(k + 1) + noise(rng);
  for (auto _ : state) {
    auto s = lle::rls_init();
    for (std::size_t k = 0; k < y.size(); ++k) {
      s = lle::rls_update(s, {static_cast<double>(k + 1), 1.0}, y[k], schedule.at(k + 1));
    }
    benchmark::DoNotOptimize(s.theta);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(y.size()));
  state.SetLabel(schedule.label());
}
BENCHMARK(BM_RlsUpdate)->Arg(0)->Arg(1);

void BM_EstimateOneIc(benchmark::State& state) {
  lle::ExperimentConfig config;
  config.system = kSystems[state.range(0)];
  const auto spec = config.system_spec();
  for (auto _ : state) {
    auto r = lle::run_ic(config, spec, spec.ic_range.lo);
    benchmark::DoNotOptimize(r.lle.data());
  }
  state.SetLabel(spec.name);
}
BENCHMARK(BM_EstimateOneIc)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
