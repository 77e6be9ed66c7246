#include <benchmark/benchmark.h>

#include "harment/entanglement.hpp"
#include "harment/kernel.hpp"
#include "harment/lattice.hpp"
#include "harment/spectral.hpp"

namespace {

using namespace harment;

void BM_BuildKernel(benchmark::State& state) {
  const auto spec = build_eta_chain({1.2, static_cast<std::size_t>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(build_kernel(spec));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildKernel)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_BuildKernel2D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto chain = build_eta_chain({1.2, n});
  const auto spec = separable_coupling(chain, chain);
  for (auto _ : state) benchmark::DoNotOptimize(build_kernel(spec));
}
BENCHMARK(BM_BuildKernel2D)->Arg(16)->Arg(32)->Arg(64);

void BM_Entropy(benchmark::State& state) {
  const auto kernel = build_kernel(build_eta_chain({0.6, 1024}));
  const auto block = Partition::block(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(entropy(kernel, block));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Entropy)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

void BM_MutualInformation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kernel = build_kernel(build_eta_chain({0.6, n}));
  for (auto _ : state) benchmark::DoNotOptimize(mutual_information(kernel, Partition::block(n / 2)));
}
BENCHMARK(BM_MutualInformation)->RangeMultiplier(2)->Range(64, 512);

void BM_Classify(benchmark::State& state) {
  const auto spec = build_eta_chain({0.6, 64});
  for (auto _ : state) benchmark::DoNotOptimize(classify(spec));
}
BENCHMARK(BM_Classify);

void BM_SzegoCoefficients(benchmark::State& state) {
  const auto spec = build_eta_chain({1.2, 64});
  const auto order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(szego_coefficients(spec, order));
}
BENCHMARK(BM_SzegoCoefficients)->Arg(50)->Arg(200)->Arg(800);

void BM_CorrelationLength(benchmark::State& state) {
  const auto kernel = build_kernel(build_eta_chain({1.2, 1024}));
  for (auto _ : state) benchmark::DoNotOptimize(correlation_length(kernel));
}
BENCHMARK(BM_CorrelationLength);

}  // namespace

BENCHMARK_MAIN();
