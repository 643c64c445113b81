#include <benchmark/benchmark.h>

#include <numbers>

#include "monocycle/mixed_solver.hpp"
#include "monocycle/operators.hpp"
#include "monocycle/oracle.hpp"
#include "monocycle/systems.hpp"

using namespace monocycle;

static void BM_LtiResolvent(benchmark::State& state) {
  const PeriodicGrid g(2.0 * std::numbers::pi, static_cast<std::size_t>(state.range(0)));
  const LtiRelation h({1.0, 0.0, 1.0}, {0.0, 1.0});
  const LtiResolvent r(h, 0.05, g);
  const auto z = initial_guess_ramp(g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(r(z));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LtiResolvent)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_StaticResolvent(benchmark::State& state) {
  const PeriodicGrid g(2.0 * std::numbers::pi, static_cast<std::size_t>(state.range(0)));
  const StaticPolyRelation e1(Polynomial({0.0, 0.0, 0.0, 0.5}));
  const auto z = PeriodicSignal::sample(g, [](double t) { return 2.0 * std::sin(t); });
  for (auto _ : state) benchmark::DoNotOptimize(resolvent_static(e1, 0.05, z));
}
BENCHMARK(BM_StaticResolvent)->Arg(1000)->Arg(5000);

static void BM_SolveVdp(benchmark::State& state) {
  const double K = static_cast<double>(state.range(0)) / 10.0;
  const MixedFeedbackSystem sys = van_der_pol(K);
  const PeriodicGrid g(period_guess(K), 5000);
  OuterConfig cfg;
  cfg.dr.lambda = K >= 10.0 ? 0.01 : 0.05;
  for (auto _ : state) {
    const SolveReport r = solve_mixed(sys, initial_guess_ramp(g, 1.0), cfg);
    state.counters["outer_iters"] = static_cast<double>(r.outer_iters);
  }
}
BENCHMARK(BM_SolveVdp)->Arg(15)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_OracleRk4(benchmark::State& state) {
  OdeConfig cfg;
  cfg.step = 1e-4;
  cfg.t_end = 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_vdp(1.5, cfg));
}
BENCHMARK(BM_OracleRk4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
