#include "falsify/bench.hpp"
#include "falsify/sut.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace {

using namespace falsify;

void BM_Rk4Harmonic(benchmark::State& state) {
  auto f = [](double, std::span<const double> x, std::span<const double>) { return std::vector<double>{x[1], -x[0]}; };
  const double x0[] = {1.0, 0.0};
  const double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ode_simulate(f, x0, {0.0, 2 * std::numbers::pi}, {}, step));
}
BENCHMARK(BM_Rk4Harmonic)->Arg(100)->Arg(1000);

void BM_OscillatorSimulate(benchmark::State& state) {
  auto sys = bench::oscillator();
  const std::vector<double> sample = {1.1, 0.2, -0.2, 0.1, 0.0};
  auto parts = decompose_sample(sample, sys.options);
  const SimulationRequest request{parts.static_params, parts.signals, sys.options.interval};
  for (auto _ : state) benchmark::DoNotOptimize(sys.model->simulate(request));
}
BENCHMARK(BM_OscillatorSimulate);

}  // namespace
