#pragma once

#include "falsify/runner.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace falsify::bench {

/// A ready-to-run falsification problem: model, default options and requirement.
struct BenchmarkSystem {
  std::string name;
  std::shared_ptr<Model> model;
  Options options;
  std::string requirement;
  PredicateMap predicates;

  StlSpecification specification() const { return StlSpecification::parse(requirement, predicates); }
};

/// Damped, forced harmonic oscillator.
///
///   dx1/dt = x2
///   dx2/dt = -x1 - 0.1·x2 + u
///
/// Static parameter x1(0) in [0, 1.2] with x2(0) = 0; one piecewise-constant
/// input u in [-0.2, 0.2] with 4 control points; interval (0, 20);
/// requirement "[] p1" with p1 = (x1 <= 1.0).
BenchmarkSystem oscillator();

/// Lotka-Volterra predator-prey system.
///
///   dx1/dt = x1 - x1·x2
///   dx2/dt = x1·x2 - x2
///
/// Static parameters x1(0), x2(0) in [0.5, 1.5]; no inputs; interval (0, 10);
/// requirement "[] !(p1 /\ p2)" with p1 = (x1 >= 1.8), p2 = (x2 <= 1.0).
/// Orbits conserve x1 - ln x1 + x2 - ln x2, so only initial states far enough
/// from the equilibrium (1, 1) reach the unsafe corner.
BenchmarkSystem nonlinear2d();

std::vector<std::string> names();

/// Throws ValidationError for an unknown name.
BenchmarkSystem by_name(std::string_view name);

}  // namespace falsify::bench
