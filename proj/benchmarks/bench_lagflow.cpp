#include <benchmark/benchmark.h>

#include <cmath>

#include "lagflow/flow.hpp"
#include "lagflow/initial_data.hpp"
#include "lagflow/lagrangian.hpp"
#include "lagflow/reference_euler.hpp"
#include "lagflow/spectral.hpp"

namespace {

using namespace lagflow;

const PressureLaw kLaw = gamma_law(1.0, 1.4);

InitialData data(const char* name, int d, int n) {
  return band_limited(make_preset(name, TorusGrid::make(d, n)));
}

void BM_Gradient(benchmark::State& state) {
  const auto d = data("smooth", 1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gradient(d.rho));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gradient)->RangeMultiplier(2)->Range(64, 4096)->Complexity();

void BM_DealiasedProduct2D(benchmark::State& state) {
  const auto d = data("vortex", 2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dealiased_product(d.u[0], d.u[1]));
}
BENCHMARK(BM_DealiasedProduct2D)->Arg(32)->Arg(64)->Arg(128);

void BM_Compose(benchmark::State& state) {
  const auto d = data("smooth", 1, static_cast<int>(state.range(0)));
  const auto method = state.range(1) == 0 ? Interpolation::Spectral : Interpolation::CubicSpline;
  const FlowMap a = back_to_labels(VelocityHistory::steady(d.u, 0.0, 0.5), 0.5, d.u.grid(), 1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(compose(d.rho, a, method));
}
BENCHMARK(BM_Compose)->ArgsProduct({{64, 256}, {0, 1}});

void BM_BackToLabels(benchmark::State& state) {
  const auto d = data("smooth", 1, static_cast<int>(state.range(0)));
  const auto hist = VelocityHistory::steady(d.u, 0.0, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(back_to_labels(hist, 0.1, d.u.grid(), 1e-2));
}
BENCHMARK(BM_BackToLabels)->Arg(64)->Arg(256);

void BM_PicardStep(benchmark::State& state) {
  const auto d = data("smooth", 1, static_cast<int>(state.range(0)));
  PicardConfig cfg;
  cfg.dt = 1e-3;
  const auto s0 = initial_state(d.rho, d.u, kLaw);
  for (auto _ : state) benchmark::DoNotOptimize(picard_step(s0, cfg, d.rho, d.u, kLaw));
}
BENCHMARK(BM_PicardStep)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_PicardStep2D(benchmark::State& state) {
  const auto d = data("vortex", 2, static_cast<int>(state.range(0)));
  PicardConfig cfg;
  cfg.dt = 1e-3;
  const auto s0 = initial_state(d.rho, d.u, kLaw);
  for (auto _ : state) benchmark::DoNotOptimize(picard_step(s0, cfg, d.rho, d.u, kLaw));
}
BENCHMARK(BM_PicardStep2D)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ReferenceRhs(benchmark::State& state) {
  const auto d = data("smooth", 1, static_cast<int>(state.range(0)));
  const EulerState s{0.0, d.rho, d.u};
  for (auto _ : state) benchmark::DoNotOptimize(euler_rhs(s, kLaw));
}
BENCHMARK(BM_ReferenceRhs)->Arg(64)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
