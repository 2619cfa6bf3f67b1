// Serial reference against the OpenMP kernels for the two hot loops:
// Gaussian sample tables and transition-time paths.

#include <benchmark/benchmark.h>

#include "acm/dynamics.hpp"
#include "acm/gff.hpp"

using namespace acm;

namespace {

ExecPolicy policy_of(const benchmark::State& s) { return s.range(1) ? ExecPolicy::parallel : ExecPolicy::serial; }

void BM_WickTable(benchmark::State& state) {
  const DomainSpec spec{1.0, Boundary::periodic, static_cast<int>(state.range(0))};
  const auto m = MeasureSpec::gamma(spec);
  const double C = m.pointwise_variance();
  McOptions opt;
  opt.policy = policy_of(state);
  const std::size_t n = 2000;
  for (auto _ : state) {
    auto t = sample_table(
        m, 1,
        [&](const FieldCoeffs& y, GffWorkspace& ws, double* out) {
          out[0] = wick_integrals(ws.grid, y, C, ws.real)[4];
        },
        n, 1, opt);
    benchmark::DoNotOptimize(t.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_TransitionPaths(benchmark::State& state) {
  const DomainSpec spec{1.0, Boundary::periodic, static_cast<int>(state.range(0))};
  dynamics::SimConfig cfg;
  cfg.eps = 0.2;
  cfg.t_max = 1e4;
  const std::size_t paths = 16;
  for (auto _ : state) {
    auto r = dynamics::sample_transition_times(spec, cfg, {}, paths, std::nullopt, dynamics::Target::B,
                                               policy_of(state));
    benchmark::DoNotOptimize(r.estimate.value);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * paths));
}

}  // namespace

BENCHMARK(BM_WickTable)->ArgNames({"N", "omp"})->ArgsProduct({{4, 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransitionPaths)->ArgNames({"N", "omp"})->ArgsProduct({{2, 4}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
