#include <benchmark/benchmark.h>

#include "dlms/network.hpp"
#include "dlms/prng.hpp"
#include "dlms/runner.hpp"
#include "dlms/scenario.hpp"
#include "dlms/signal.hpp"

namespace {

void BM_GaussianDraw(benchmark::State& state) {
  dlms::RandomStream stream(1);
  for (auto _ : state) benchmark::DoNotOptimize(stream.next_gaussian(0.0, 1.0));
}
BENCHMARK(BM_GaussianDraw);

void BM_CtaIteration(benchmark::State& state) {
  const dlms::Scenario scenario = dlms::builtin("table1");
  const dlms::Network network = dlms::make_network(scenario);
  auto states = dlms::initial_states(scenario);
  dlms::SampleSource source(scenario, 0);
  for (auto _ : state) {
    states = dlms::cta_iteration(states, network, source.next());
    benchmark::DoNotOptimize(states.data());
  }
}
BENCHMARK(BM_CtaIteration);

void BM_SingleRun(benchmark::State& state) {
  dlms::Scenario scenario = dlms::builtin("table2");
  scenario.iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dlms::run_single(scenario, 0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SingleRun)->Arg(1000)->Arg(10000);

void BM_Ensemble(benchmark::State& state) {
  const dlms::Scenario scenario = dlms::builtin("table1");
  const dlms::RunOptions options{static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(dlms::run(scenario, options));
}
BENCHMARK(BM_Ensemble)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
