#include <benchmark/benchmark.h>

#include "ballsde/analysis.hpp"
#include "ballsde/noise.hpp"
#include "ballsde/philox.hpp"
#include "ballsde/schemes.hpp"

using namespace ballsde;

namespace {

ModelParams reference_model() { return ModelParams::isotropic(2, 13.0, kSqrt2, {0.7, 0.7}, 1.0); }

void BM_Philox(benchmark::State& state) {
  std::uint32_t i = 0;
  for (auto _ : state) {
    auto out = Philox4x32::generate({i++, 0, 0, 0}, {1, 0});
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_Philox);

void BM_StandardNormal(benchmark::State& state) {
  std::uint32_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(standard_normal_at({1, 0}, k++, 0));
}
BENCHMARK(BM_StandardNormal);

void BM_SamplePath(benchmark::State& state) {
  const TimeGrid grid(1.0, static_cast<std::size_t>(state.range(0)));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_path({1, i++}, grid, 2, 0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePath)->Arg(128)->Arg(8192);

void BM_BackwardStep(benchmark::State& state) {
  const auto p = reference_model();
  const BackwardStepper stepper(p, 1e-3);
  double in[3] = {0.5, 0.6, 0.6};
  double out[3];
  const double dW[2] = {0.01, -0.02};
  for (auto _ : state) {
    stepper.advance(in, dW, {}, out);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_BackwardStep);

void BM_SimulateBackward(benchmark::State& state) {
  const auto p = reference_model();
  const auto noise = sample_path({1, 0}, TimeGrid(1.0, static_cast<std::size_t>(state.range(0))), 2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_backward(p, noise));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateBackward)->Arg(128)->Arg(8192);

void BM_Expm(benchmark::State& state) {
  const auto gen = radial_generator(reference_model(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(expm(gen.G, 1.0));
}
BENCHMARK(BM_Expm)->Arg(3)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
