#include <benchmark/benchmark.h>

#include "mmplan/evalmc.hpp"
#include "mmplan/gen.hpp"
#include "mmplan/planners.hpp"

namespace {

void BM_MonteCarloTrials(benchmark::State& state) {
  static mmplan::ScenarioBundle bundle = mmplan::generate_scenario(mmplan::SizeClass::Tiny, 1);
  static mmplan::Deployment dep = mmplan::solve_bgga(bundle.scenario, {}, 1);
  mmplan::McConfig cfg;
  cfg.n_trials = static_cast<int>(state.range(0));
  cfg.seed = 99;
  cfg.use_grid_center = true;
  cfg.threads = 1;
  if (!dep.feasible) {
    state.SkipWithError("benchmark deployment infeasible");
    return;
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(mmplan::run_evaluation(dep, bundle.scenario, cfg));
}
BENCHMARK(BM_MonteCarloTrials)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
