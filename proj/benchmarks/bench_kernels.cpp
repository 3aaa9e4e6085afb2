#include <benchmark/benchmark.h>

#include <map>

#include "fds/metrics.hpp"
#include "fds/mlp_field.hpp"
#include "fds/oracle_field.hpp"
#include "fds/sampler.hpp"
#include "fds/train.hpp"

namespace fds {
namespace {

const OracleField& oracle(Index k) {
  static std::map<Index, OracleField> cache;
  auto it = cache.find(k);
  if (it == cache.end()) {
    it = cache.emplace(k, OracleField(build_empirical(Checkerboard{}, k, 1), Schedule::linear())).first;
  }
  return it->second;
}

const MlpField& mlp() {
  static const MlpField field = MlpField::initialized(MlpField::default_widths(2), 3);
  return field;
}

void BM_OracleVelocity(benchmark::State& state) {
  const auto& f = oracle(state.range(0));
  const Vec x{{0.3, -0.4}};
  for (auto _ : state) benchmark::DoNotOptimize(f.velocity(x, 0.5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OracleVelocity)->Arg(256)->Arg(10000)->Arg(100000);

void BM_OracleDiscrepancy(benchmark::State& state) {
  const auto& f = oracle(state.range(0));
  const Vec x{{0.3, -0.4}};
  for (auto _ : state) benchmark::DoNotOptimize(f.discrepancy_exact(x, 0.5));
}
BENCHMARK(BM_OracleDiscrepancy)->Arg(256)->Arg(100000);

void BM_MlpVelocity(benchmark::State& state) {
  const Vec x{{0.3, -0.4}};
  for (auto _ : state) benchmark::DoNotOptimize(mlp().velocity(x, 0.5));
}
BENCHMARK(BM_MlpVelocity);

void BM_MlpJvp(benchmark::State& state) {
  const Vec x{{0.3, -0.4}}, dir{{1.0, 0.0}};
  for (auto _ : state) benchmark::DoNotOptimize(mlp().jvp(x, 0.5, dir));
}
BENCHMARK(BM_MlpJvp);

void BM_MlpExactDivergence(benchmark::State& state) {
  const Vec x{{0.3, -0.4}};
  for (auto _ : state) benchmark::DoNotOptimize(divergence_exact_basis(mlp(), x, 0.5));
}
BENCHMARK(BM_MlpExactDivergence);

void BM_MlpBatchedForward(benchmark::State& state) {
  Rng rng(1);
  const auto batch = draw_cfm_batch(Checkerboard{}, Schedule::linear(), state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(mlp().forward(batch.inputs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpBatchedForward)->Arg(512);

void BM_MlpLossAndGradient(benchmark::State& state) {
  Rng rng(1);
  const auto batch = draw_cfm_batch(Checkerboard{}, Schedule::linear(), state.range(0), rng);
  Vec grad;
  for (auto _ : state) benchmark::DoNotOptimize(mlp().loss_and_gradient(batch.inputs, batch.targets, &grad));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpLossAndGradient)->Arg(512);

void BM_W2Exact(benchmark::State& state) {
  const Index n = state.range(0);
  const Mat a = sample_prior(n, 2, 1), b = sample_target(Checkerboard{}, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(w2_exact(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(BM_W2Exact)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNCubed);

void BM_W2Sliced(benchmark::State& state) {
  const Index n = state.range(0);
  const Mat a = sample_prior(n, 2, 1), b = sample_target(Checkerboard{}, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(w2_sliced(a, b, kDefaultProjections, 3));
}
BENCHMARK(BM_W2Sliced)->Arg(1024)->Arg(8192);

void BM_Refine(benchmark::State& state) {
  FdsConfig cfg = FdsConfig::toy();
  cfg.m = state.range(0);
  const Vec x{{0.3, -0.4}};
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(refine(mlp(), x, 0.3, cfg, rng));
}
BENCHMARK(BM_Refine)->Arg(1)->Arg(8);

void BM_ToyPipeline(benchmark::State& state) {
  const auto grid = uniform_grid(20);
  FdsConfig cfg = FdsConfig::toy();
  cfg.m = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_pipeline(mlp(), Solver::kEuler, grid, cfg, 512, 1, {false, false}));
  }
}
BENCHMARK(BM_ToyPipeline)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace fds

BENCHMARK_MAIN();
