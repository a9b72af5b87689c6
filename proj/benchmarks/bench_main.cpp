#include <benchmark/benchmark.h>

#include <vector>

#include "bellfilter/bellfilter.hpp"

using namespace bellfilter;

namespace {

const DensityMatrix& case_state() {
  static const DensityMatrix rho = rho2(-0.49);
  return rho;
}

void BM_Mvci(benchmark::State& state) {
  const Eigen::Matrix3d T = correlation_data(case_state()).T();
  for (auto _ : state) benchmark::DoNotOptimize(mvci(T).value);
}
BENCHMARK(BM_Mvci);

void BM_CorrelationData(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(correlation_data(case_state()));
}
BENCHMARK(BM_CorrelationData);

void BM_FilteredObjective(benchmark::State& state) {
  const ExtendedCorrelation tt = correlation_data(case_state());
  FilterParams fp;
  fp.x = 0.4;
  fp.y = 0.7;
  fp.euler_a = {0.3, 1.1, -0.2};
  fp.euler_b = {1.4, 0.5, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(filtered_mvci_objective(tt, fp));
}
BENCHMARK(BM_FilteredObjective);

void BM_MaximizeFiltered(benchmark::State& state) {
  OptimizerOptions opts;
  opts.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(maximize_filtered_mvci(case_state(), opts).value);
}
BENCHMARK(BM_MaximizeFiltered)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_VertesiTerms(benchmark::State& state) {
  const Eigen::Matrix3d X = correlation_data(werner(0.8)).T();
  const int n = static_cast<int>(state.range(0));
  const CapWindow w{0.0, 0.9, 0.0, 0.9};
  for (auto _ : state) benchmark::DoNotOptimize(vertesi_terms(X, w, {n, n}).sum());
}
BENCHMARK(BM_VertesiTerms)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

void BM_LhvSample(benchmark::State& state) {
  const LhvModel model(0.4);
  const Eigen::Vector3d a = Eigen::Vector3d(1, 1, 0).normalized();
  const Eigen::Vector3d b = Eigen::Vector3d(0, 1, 1).normalized();
  const std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_lhv(model, a, b, n, 7).p_pp);
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_LhvSample)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
