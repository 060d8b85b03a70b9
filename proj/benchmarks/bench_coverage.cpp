#include <benchmark/benchmark.h>

#include "mmplan/coverage.hpp"
#include "mmplan/gen.hpp"

namespace {

struct CoverageFixture {
  mmplan::ScenarioBundle bundle;
  mmplan::LinkTable table;
  double phi;
  CoverageFixture()
      : bundle(mmplan::generate_scenario(mmplan::SizeClass::Small, 1)),
        table(mmplan::build_link_table(bundle.scenario, 1)),
        phi(mmplan::solve_phi(bundle.scenario.radio().gamma, bundle.scenario.radio().n_rf)) {}
};

CoverageFixture& fixture() {
  static CoverageFixture f;
  return f;
}

void BM_CoveragePrefix(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(mmplan::max_coverage(f.table, f.bundle.scenario, f.phi,
                                                  mmplan::CoverageMethod::PrefixScan, 1));
}
BENCHMARK(BM_CoveragePrefix)->Unit(benchmark::kMillisecond);

void BM_CoverageBisection(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(mmplan::max_coverage(f.table, f.bundle.scenario, f.phi,
                                                  mmplan::CoverageMethod::Bisection, 1));
}
BENCHMARK(BM_CoverageBisection)->Unit(benchmark::kMillisecond);

}  // namespace
