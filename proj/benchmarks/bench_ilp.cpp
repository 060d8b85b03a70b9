#include <benchmark/benchmark.h>

#include "mmplan/ilp.hpp"
#include "mmplan/rng.hpp"

namespace {

// Random set-cover style instance: minimize sum of costs subject to element
// coverage rows.
mmplan::IlpInstance random_cover(int n_vars, int n_rows, std::uint64_t seed) {
  mmplan::CounterRng rng(mmplan::CounterRng::mix(seed));
  mmplan::IlpInstance inst;
  inst.n_vars = n_vars;
  inst.objective.resize(static_cast<std::size_t>(n_vars));
  for (auto& c : inst.objective) c = 0.2 + rng.next_double();
  for (int r = 0; r < n_rows; ++r) {
    mmplan::IlpConstraint c;
    c.sense = mmplan::Sense::Ge;
    c.rhs = 1.0;
    for (int j = 0; j < n_vars; ++j)
      if (rng.next_double() < 0.3) c.coeffs.emplace_back(j, 1.0);
    if (c.coeffs.empty()) c.coeffs.emplace_back(static_cast<int>(rng.next_below(n_vars)), 1.0);
    inst.constraints.push_back(std::move(c));
  }
  return inst;
}

void BM_SolveBbSetCover(benchmark::State& state) {
  auto inst = random_cover(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(mmplan::solve_bb(inst));
}
BENCHMARK(BM_SolveBbSetCover)->Arg(12)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_LpRelax(benchmark::State& state) {
  auto inst = random_cover(60, 60, 11);
  std::vector<double> lo(60, 0.0), hi(60, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(mmplan::lp_relax(inst, lo, hi));
}
BENCHMARK(BM_LpRelax)->Unit(benchmark::kMillisecond);

}  // namespace
