#pragma once

#include "falsify/monitor.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace falsify {

/// Closed real interval [lower, upper].
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const noexcept { return upper - lower; }
  bool contains(double v) const noexcept { return v >= lower && v <= upper; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class InterpolationKind { PiecewiseConstant, PiecewiseLinear };

/// Time-varying input signal defined by control values at evenly spaced
/// control times over [start, end].
///
/// With k control values the control times are start + m·(end - start)/(k - 1),
/// the last pinned to `end`; a single value sits at `start` and holds for the
/// whole interval. Piecewise-constant signals take control value m on
/// [t_m, t_{m+1}); piecewise-linear signals interpolate between neighbours.
/// Queries outside the interval are clamped to it.
class Interpolator {
 public:
  /// Throws ValidationError for too few values (1 for constant, 2 for linear),
  /// a non-increasing interval, or non-finite values.
  Interpolator(InterpolationKind kind, Interval interval, std::vector<double> values);

  double at(double t) const;

  InterpolationKind kind() const noexcept { return kind_; }
  Interval interval() const noexcept { return interval_; }
  const std::vector<double>& control_times() const noexcept { return times_; }
  const std::vector<double>& control_values() const noexcept { return values_; }

 private:
  InterpolationKind kind_;
  Interval interval_;
  std::vector<double> times_;
  std::vector<double> values_;
};

Interpolator interpolator_create(InterpolationKind kind, Interval interval, std::vector<double> values);

/// Row-major matrix of input signal values: one row per signal, one column per time.
using SignalMatrix = std::vector<std::vector<double>>;

/// What a blackbox function receives: static parameters / initial conditions,
/// the time grid, and the input signals sampled on it.
struct SimulationInput {
  std::vector<double> static_params;
  std::vector<double> times;
  SignalMatrix signal_values;

  /// Throws ValidationError unless times are strictly increasing and every row
  /// of signal_values has one entry per time.
  void validate() const;
};

/// What a blackbox function returns.
struct SimulationOutput {
  std::vector<double> timestamps;
  std::vector<std::vector<double>> trajectories;  // one state row per timestamp
};

/// User-supplied system: (X, T, U) -> (timestamps, trajectories).
using BlackboxFunction = std::function<SimulationOutput(const SimulationInput&)>;

/// Evenly spaced grid of `points` times over the interval, both ends included.
std::vector<double> time_grid(Interval interval, std::size_t points);

/// Runs `func` and validates its output: Trace invariants plus every timestamp
/// inside `interval` (within 1e-9). Exceptions escaping `func` are rethrown as
/// SimulationError; malformed output raises TraceValidationError.
Trace blackbox_simulate(const BlackboxFunction& func, const SimulationInput& input, Interval interval);

/// Right-hand side of dx/dt = f(t, x, u).
using DerivativeFunction =
    std::function<std::vector<double>(double t, std::span<const double> state, std::span<const double> inputs)>;

/// Classical fixed-step fourth-order Runge-Kutta from interval.lower to
/// interval.upper.
///
/// Uses ceil(length / step) equal steps (so the effective step never exceeds
/// `step`) and records the state at every step boundary, both endpoints
/// included. Stage inputs are the signals evaluated at the stage time.
/// Throws SimulationError naming the time at which the state became non-finite.
Trace ode_simulate(const DerivativeFunction& derivative, std::span<const double> initial_state,
                   Interval interval, std::span<const Interpolator> signals, double step);

/// A concrete simulation request: decoded static parameters and input signals.
struct SimulationRequest {
  std::vector<double> static_params;
  std::vector<Interpolator> signals;
  Interval interval;
};

/// System under test.
class Model {
 public:
  virtual ~Model() = default;
  virtual Trace simulate(const SimulationRequest& request) = 0;
  /// True when simulate() may be called concurrently from several runs.
  virtual bool reentrant() const { return false; }
};

/// Wraps a user blackbox function.
class BlackboxModel final : public Model {
 public:
  enum class InputMode {
    /// U holds each interpolated signal sampled on an evenly spaced grid of
    /// `grid_points` times.
    Interpolated,
    /// U holds the raw control values and T the control times. Every signal
    /// must then have the same number of control points.
    ControlPoints,
  };

  struct Settings {
    InputMode mode = InputMode::Interpolated;
    std::size_t grid_points = 1001;
    bool reentrant = false;
  };

  explicit BlackboxModel(BlackboxFunction func);
  BlackboxModel(BlackboxFunction func, Settings settings);

  Trace simulate(const SimulationRequest& request) override;
  bool reentrant() const override { return settings_.reentrant; }

 private:
  BlackboxFunction func_;
  Settings settings_;
};

/// ODE system integrated with ode_simulate.
class OdeModel final : public Model {
 public:
  /// Maps static parameters to the initial state; identity when unset.
  using InitialState = std::function<std::vector<double>(std::span<const double> static_params)>;

  struct Settings {
    /// Integration step; when unset, (interval length) / 1000.
    std::optional<double> step;
    InitialState initial_state;
  };

  explicit OdeModel(DerivativeFunction derivative);
  OdeModel(DerivativeFunction derivative, Settings settings);

  Trace simulate(const SimulationRequest& request) override;
  bool reentrant() const override { return true; }

 private:
  DerivativeFunction derivative_;
  Settings settings_;
};

}  // namespace falsify
