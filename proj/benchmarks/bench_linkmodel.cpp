#include <benchmark/benchmark.h>

#include "mmplan/gen.hpp"
#include "mmplan/linkmodel.hpp"

namespace {

void BM_AccessBlockProb(benchmark::State& state) {
  double mu = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mmplan::access_block_prob(mu, 12));
}
BENCHMARK(BM_AccessBlockProb)->Arg(4)->Arg(12)->Arg(40);

void BM_SolvePhi(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mmplan::solve_phi(0.05, 12));
}
BENCHMARK(BM_SolvePhi);

void BM_BuildLinkTable(benchmark::State& state) {
  mmplan::ScenarioBundle bundle =
      mmplan::generate_scenario(mmplan::SizeClass::Small, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(mmplan::build_link_table(bundle.scenario, 1));
}
BENCHMARK(BM_BuildLinkTable)->Unit(benchmark::kMillisecond);

}  // namespace
