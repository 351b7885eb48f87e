#include <benchmark/benchmark.h>

#include <cmath>

#include "landau/coefficients.hpp"
#include "landau/solver.hpp"

using namespace landau;

namespace {

ScalarField bimodal(int n) {
  const VelocityGrid g = make_grid(n, 8.0);
  ScalarField f(g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double y2 = g.node(j) * g.node(j) + g.node(k) * g.node(k);
        const double a = g.node(i) - 1.2, b = g.node(i) + 1.2;
        f.at(i, j, k) = std::exp(-(a * a + y2) / 2.0) + std::exp(-(b * b + y2) / 2.0);
      }
  return f;
}

void BM_Flux(benchmark::State &st) {
  const ScalarField f = bimodal(static_cast<int>(st.range(0)));
  const CoefficientSet cs = compute_coefficients(f);
  for (auto _ : st)
    benchmark::DoNotOptimize(flux_divergence(flux(f, cs)));
}

void BM_FluxSerial(benchmark::State &st) {
  const ScalarField f = bimodal(static_cast<int>(st.range(0)));
  const CoefficientSet cs = compute_coefficients(f);
  for (auto _ : st)
    benchmark::DoNotOptimize(serial::flux_divergence(serial::flux(f, cs)));
}

void BM_ConvolveFFT(benchmark::State &st) {
  const ScalarField f = bimodal(static_cast<int>(st.range(0)));
  const auto engine = CoefficientEngine::for_grid(f.grid);
  for (auto _ : st)
    benchmark::DoNotOptimize(engine->convolve(f, KernelComponent::Scalar));
}

void BM_ConvolveDirect(benchmark::State &st) {
  const ScalarField f = bimodal(static_cast<int>(st.range(0)));
  const auto engine = CoefficientEngine::for_grid(f.grid);
  for (auto _ : st)
    benchmark::DoNotOptimize(
        serial::convolve_direct(f, engine->table(), KernelComponent::Scalar));
}

void BM_Coefficients(benchmark::State &st) {
  const ScalarField f = bimodal(static_cast<int>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(compute_coefficients(f));
}

} // namespace

BENCHMARK(BM_Flux)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FluxSerial)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveFFT)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveDirect)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Coefficients)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
