#include <benchmark/benchmark.h>

#include "matchrobust/matchrobust.hpp"

using namespace matchrobust;

namespace {

Instance culture(CultureKind kind, std::size_t n) {
  const double param = culture_has_param(kind) ? standard_params(kind).front() : 0;
  return generate({kind, param, n, 7});
}

void BM_GaleShapley(benchmark::State& state) {
  const auto inst = culture(CultureKind::IC, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gale_shapley(inst));
}
BENCHMARK(BM_GaleShapley)->Arg(50)->Arg(200);

void BM_RotationPoset(benchmark::State& state) {
  const auto inst = culture(CultureKind::IC, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_rotation_poset(inst));
}
BENCHMARK(BM_RotationPoset)->Arg(50)->Arg(200);

void BM_SwapRobustness(benchmark::State& state) {
  const auto inst = culture(CultureKind::IC, static_cast<std::size_t>(state.range(0)));
  const auto m = gale_shapley(inst);
  for (auto _ : state) benchmark::DoNotOptimize(matching_swap_robustness(inst, m));
}
BENCHMARK(BM_SwapRobustness)->Arg(50)->Arg(200);

void BM_DeleteRobustness(benchmark::State& state) {
  const auto inst = culture(CultureKind::IC, static_cast<std::size_t>(state.range(0)));
  const auto m = gale_shapley(inst);
  for (auto _ : state) benchmark::DoNotOptimize(matching_delete_robustness(inst, m));
}
BENCHMARK(BM_DeleteRobustness)->Arg(50);

void BM_BlockingCount(benchmark::State& state) {
  const auto inst = culture(CultureKind::IC, 10);
  const auto m = gale_shapley(inst);
  const auto l = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(unstable_profiles_upper(inst, m, l));
}
BENCHMARK(BM_BlockingCount)->Arg(2)->Arg(8);

void BM_MallowsPerturb(benchmark::State& state) {
  const auto inst = culture(CultureKind::IC, static_cast<std::size_t>(state.range(0)));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(perturb_instance(inst, 0.01, rng));
}
BENCHMARK(BM_MallowsPerturb)->Arg(50);

void BM_Threshold(benchmark::State& state) {
  const auto inst = culture(CultureKind::IC, 50);
  const auto m = gale_shapley(inst);
  const auto grid = coarse_grid();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fifty_percent_threshold(inst, m, grid, MonteCarloConfig{100, 3, 1}));
  }
}
BENCHMARK(BM_Threshold)->Unit(benchmark::kMillisecond);

void BM_ProximityRobust(benchmark::State& state) {
  const auto inst = culture(CultureKind::MalMD, 50);
  for (auto _ : state) benchmark::DoNotOptimize(proximity_robust_matching(inst));
}
BENCHMARK(BM_ProximityRobust)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
