#include "falsify/bench.hpp"

#include "falsify/error.hpp"

namespace falsify::bench {

BenchmarkSystem oscillator() {
  auto derivative = [](double, std::span<const double> x, std::span<const double> u) {
    return std::vector<double>{x[1], -x[0] - 0.1 * x[1] + u[0]};
  };
  OdeModel::Settings settings;
  settings.initial_state = [](std::span<const double> p) { return std::vector<double>{p[0], 0.0}; };

  BenchmarkSystem sys;
  sys.name = "oscillator";
  sys.model = std::make_shared<OdeModel>(derivative, std::move(settings));
  sys.options.static_params = {{0.0, 1.2}};
  sys.options.signals = {SignalOptions{{-0.2, 0.2}, 4, InterpolationKind::PiecewiseConstant}};
  sys.options.interval = {0.0, 20.0};
  sys.options.iterations = 100;
  sys.requirement = "[] p1";
  sys.predicates = PredicateMap({"x1", "x2"});
  sys.predicates.add(LinearPredicate("p1", {1.0, 0.0}, 1.0));
  return sys;
}

BenchmarkSystem nonlinear2d() {
  auto derivative = [](double, std::span<const double> x, std::span<const double>) {
    return std::vector<double>{x[0] - x[0] * x[1], x[0] * x[1] - x[1]};
  };

  BenchmarkSystem sys;
  sys.name = "nonlinear2d";
  sys.model = std::make_shared<OdeModel>(derivative);
  sys.options.static_params = {{0.5, 1.5}, {0.5, 1.5}};
  sys.options.interval = {0.0, 10.0};
  sys.options.iterations = 200;
  sys.requirement = "[] !(p1 /\\ p2)";
  sys.predicates = PredicateMap({"x1", "x2"});
  sys.predicates.add(LinearPredicate("p1", {-1.0, 0.0}, -1.8));  // x1 >= 1.8
  sys.predicates.add(LinearPredicate("p2", {0.0, 1.0}, 1.0));    // x2 <= 1.0
  return sys;
}

std::vector<std::string> names() { return {"oscillator", "nonlinear2d"}; }

BenchmarkSystem by_name(std::string_view name) {
  if (name == "oscillator") return oscillator();
  if (name == "nonlinear2d") return nonlinear2d();
  throw ValidationError("unknown benchmark '" + std::string(name) + "'");
}

}  // namespace falsify::bench
