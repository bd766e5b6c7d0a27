#include <benchmark/benchmark.h>

#include <fbmarea/cameron_martin.hpp>
#include <fbmarea/density.hpp>
#include <fbmarea/kernel.hpp>
#include <fbmarea/levy_area.hpp>
#include <fbmarea/malliavin.hpp>
#include <fbmarea/pathgen.hpp>
#include <fbmarea/variation.hpp>

using namespace fbmarea;

namespace {

const HurstParams kParams(0.4, 1.0);

void BM_PVarExact(benchmark::State& state) {
  const unsigned level = static_cast<unsigned>(state.range(0));
  const FbmSampler sampler(kParams, level, SamplerMethod::circulant);
  const auto path = sampler.sample(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(pvar_exact(path.component(0), kParams.default_p()).value);
  state.SetComplexityN(static_cast<long>(path.size()));
}
BENCHMARK(BM_PVarExact)->DenseRange(6, 11)->Complexity(benchmark::oNSquared);

void BM_Sampler(benchmark::State& state) {
  const auto method = state.range(1) ? SamplerMethod::circulant : SamplerMethod::cholesky;
  const FbmSampler sampler(kParams, static_cast<unsigned>(state.range(0)), method);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(7, i++));
}
BENCHMARK(BM_Sampler)->ArgsProduct({{6, 8, 10}, {0, 1}})->ArgNames({"level", "circulant"});

void BM_SamplerSetup(benchmark::State& state) {
  const auto method = state.range(1) ? SamplerMethod::circulant : SamplerMethod::cholesky;
  for (auto _ : state) benchmark::DoNotOptimize(FbmSampler(kParams, static_cast<unsigned>(state.range(0)), method));
}
BENCHMARK(BM_SamplerSetup)->ArgsProduct({{6, 8, 10}, {0, 1}})->ArgNames({"level", "circulant"});

void BM_KernelKH(benchmark::State& state) {
  const CovKernel k(kParams);
  double s = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.eval_KH(0.9, s));
    s = s < 0.8 ? s * 1.3 : 1e-6;
  }
}
BENCHMARK(BM_KernelKH);

void BM_LevyArea(benchmark::State& state) {
  const FbmSampler sampler(kParams, static_cast<unsigned>(state.range(0)), SamplerMethod::circulant);
  const auto path = sampler.sample(3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(levy_area(path));
}
BENCHMARK(BM_LevyArea)->Arg(8)->Arg(12);

void BM_MalliavinMatrix(benchmark::State& state) {
  const unsigned level = static_cast<unsigned>(state.range(0));
  const FbmSampler sampler(kParams, level, SamplerMethod::circulant);
  const GridGram gram(kParams, sampler.times());
  const auto omega = sampler.sample(5, 0);
  for (auto _ : state) benchmark::DoNotOptimize(malliavin_matrix(gram, omega).phi);
}
BENCHMARK(BM_MalliavinMatrix)->DenseRange(5, 9);

void BM_Spectral(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(spectral_diagnostic(kParams, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Spectral)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Kde(benchmark::State& state) {
  const auto y = sample_Y({kParams, 6, static_cast<std::size_t>(state.range(0)), 9, SamplerMethod::circulant}, 1);
  const auto box = default_box(y, 21);
  for (auto _ : state) benchmark::DoNotOptimize(kde(y, box, std::nullopt, 1).values.data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Kde)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
