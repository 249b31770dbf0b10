#include <memory>
#include <random>

#include <benchmark/benchmark.h>

#include "funnel/cone.hpp"
#include "funnel/counterexample.hpp"

using namespace funnel;

namespace {

std::shared_ptr<const OmegaEtaResult> dp(double t_max) {
  const Width eta = Width::power_shift(0.4, 1.0);
  GridOptions opt;
  opt.t_max = t_max;
  opt.anchors = {1.0};
  return std::make_shared<const OmegaEtaResult>(compute_omega_eta(Modulus::power(0.5), eta, build_grid(eta, opt)));
}

void BM_OmegaEtaDp(benchmark::State& state) {
  const double t_max = static_cast<double>(state.range(0));
  const Width eta = Width::power_shift(0.4, 1.0);
  GridOptions opt;
  opt.t_max = t_max;
  const AdaptiveGrid grid = build_grid(eta, opt);
  const Modulus w = Modulus::power(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(compute_omega_eta(w, eta, grid));
  state.counters["nodes"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_OmegaEtaDp)->Arg(10000)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_Envelope(benchmark::State& state) {
  const auto r = dp(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_envelope(r));
  state.counters["nodes"] = static_cast<double>(r->grid.size());
}
BENCHMARK(BM_Envelope)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_Semiconvexity(benchmark::State& state) {
  static const CounterexampleBundle B = build_counterexample(build_envelope(dp(65536.0)));
  const FunnelRegion region(B.eta(), 1e-3, B.x_max);
  const ScalarField f = B.as_field();
  SemiconvexityOptions so;
  so.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_semiconvexity(f, B.omega(), region, so));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Semiconvexity)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_DoubleDescription(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  std::mt19937_64 eng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd A(n + m, n);
  A.topRows(n) = -Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) A(n + i, k) = g(eng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(cone_from_hform(n, A));
}
BENCHMARK(BM_DoubleDescription)->Args({3, 8})->Args({4, 12})->Args({5, 16})->Args({6, 20});

}  // namespace

BENCHMARK_MAIN();
