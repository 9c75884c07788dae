#include "falsify/bench.hpp"
#include "falsify/optim.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace falsify;

double sphere(std::span<const double> s) {
  double acc = 0.0;
  for (double v : s) acc += v * v;
  return acc;
}

template <class Engine>
void BM_SphereSearch(benchmark::State& state) {
  const SearchSpace space({{-5.0, 5.0}, {-5.0, 5.0}, {-5.0, 5.0}});
  const Engine engine;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.optimize(sphere, space, {500, Behavior::Minimization, seed++}));
  }
}
BENCHMARK(BM_SphereSearch<UniformRandom>);
BENCHMARK(BM_SphereSearch<SimulatedAnnealing>);
BENCHMARK(BM_SphereSearch<Basinhopping>);

// One full minimization run on the oscillator: dominated by simulation cost.
void BM_OscillatorRun(benchmark::State& state) {
  auto sys = bench::oscillator();
  sys.options.iterations = 50;
  sys.options.behavior = Behavior::Minimization;
  const auto spec = sys.specification();
  for (auto _ : state) benchmark::DoNotOptimize(staliro(spec, *sys.model, UniformRandom(), sys.options));
}
BENCHMARK(BM_OscillatorRun)->Unit(benchmark::kMillisecond);

}  // namespace
