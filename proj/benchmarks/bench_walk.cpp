#include <benchmark/benchmark.h>

#include "cyclewalk/analysis.hpp"
#include "cyclewalk/spectral.hpp"
#include "cyclewalk/walk.hpp"

namespace cw = cyclewalk;

static void BM_StepRecycled(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  cw::Walker w(cw::WalkState::localized(d, cw::Model::Recycled, 0, cw::named_coin(cw::NamedState::PsiA)),
               cw::CoinConfig(0.7));
  for (auto _ : state) {
    w.step();
    benchmark::DoNotOptimize(w.state().row(0));
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_StepRecycled)->RangeMultiplier(4)->Range(4, 1024);

static void BM_StepMemory(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  cw::Walker w(cw::WalkState::localized(d, cw::Model::Memory, 0, cw::named_coin(cw::NamedState::PsiA)),
               cw::CoinConfig(0.0));
  for (auto _ : state) {
    w.step();
    benchmark::DoNotOptimize(w.state().row(0));
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_StepMemory)->RangeMultiplier(4)->Range(4, 1024);

static void BM_Eigensystem(benchmark::State& state) {
  const cw::Matrix4 m = cw::build_mk(3, 11, cw::CoinConfig(1.3)).matrix;
  for (auto _ : state) benchmark::DoNotOptimize(cw::eigensystem(m));
}
BENCHMARK(BM_Eigensystem);

static void BM_LimitingDistribution(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto init = cw::InitialState::named(cw::NamedState::PsiB);
  for (auto _ : state) benchmark::DoNotOptimize(cw::limiting_distribution(cw::CoinConfig(0.0), d, init));
}
BENCHMARK(BM_LimitingDistribution)->RangeMultiplier(2)->Range(8, 256);

static void BM_ClosedFormDistribution(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto cache = cw::SpectralCache::recycled(d, cw::CoinConfig(2.5), cw::named_coin(cw::NamedState::PsiC));
  std::int64_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cache.distribution(++t));
}
BENCHMARK(BM_ClosedFormDistribution)->RangeMultiplier(4)->Range(8, 128);
BENCHMARK_MAIN();
