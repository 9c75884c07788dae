#include "falsify/sut.hpp"

#include "falsify/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace falsify {

namespace {

void check_interval(Interval interval, const char* what) {
  if (!std::isfinite(interval.lower) || !std::isfinite(interval.upper) ||
      !(interval.lower < interval.upper)) {
    std::ostringstream msg;
    msg << what << " interval (" << interval.lower << ", " << interval.upper
        << ") must be finite with start < end";
    throw ValidationError(msg.str());
  }
}

}  // namespace

// ── interpolation ───────────────────────────────────────────────────────────

Interpolator::Interpolator(InterpolationKind kind, Interval interval, std::vector<double> values)
    : kind_(kind), interval_(interval), values_(std::move(values)) {
  check_interval(interval_, "signal");
  const std::size_t min_values = kind_ == InterpolationKind::PiecewiseLinear ? 2 : 1;
  if (values_.size() < min_values) {
    throw ValidationError("interpolator needs at least " + std::to_string(min_values) +
                          " control values, got " + std::to_string(values_.size()));
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw ValidationError("interpolator control values must be finite");
  }
  times_ = values_.size() == 1 ? std::vector<double>{interval_.lower} : time_grid(interval_, values_.size());
}

double Interpolator::at(double t) const {
  t = std::clamp(t, interval_.lower, interval_.upper);
  if (values_.size() == 1) return values_.front();
  // index of the last control time <= t
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto k = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
  if (kind_ == InterpolationKind::PiecewiseConstant || k + 1 == times_.size()) {
    return values_[k];
  }
  const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return values_[k] + w * (values_[k + 1] - values_[k]);
}

Interpolator interpolator_create(InterpolationKind kind, Interval interval, std::vector<double> values) {
  return Interpolator(kind, interval, std::move(values));
}

std::vector<double> time_grid(Interval interval, std::size_t points) {
  if (points < 2) throw ValidationError("a time grid needs at least two points");
  std::vector<double> grid(points);
  const double span = interval.upper - interval.lower;
  const double n = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = interval.lower + span * (static_cast<double>(i) / n);
  }
  grid.back() = interval.upper;
  return grid;
}

// ── blackbox ────────────────────────────────────────────────────────────────

void SimulationInput::validate() const {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw ValidationError("simulation times must be strictly increasing");
  }
  for (const auto& row : signal_values) {
    if (row.size() != times.size()) {
      throw ValidationError("signal row has " + std::to_string(row.size()) + " values for " +
                            std::to_string(times.size()) + " times");
    }
  }
}

Trace blackbox_simulate(const BlackboxFunction& func, const SimulationInput& input, Interval interval) {
  input.validate();
  SimulationOutput out;
  try {
    out = func(input);
  } catch (const SimulationError&) {
    throw;
  } catch (const std::exception& e) {
    throw SimulationError(std::string("blackbox failed: ") + e.what());
  } catch (...) {
    throw SimulationError("blackbox failed with a non-standard exception");
  }
  Trace trace(std::move(out.timestamps), std::move(out.trajectories));
  constexpr double tol = 1e-9;
  if (trace.timestamps().front() < interval.lower - tol || trace.timestamps().back() > interval.upper + tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "blackbox timestamps [" << trace.timestamps().front() << ", " << trace.timestamps().back()
        << "] fall outside the simulation interval [" << interval.lower << ", " << interval.upper << "]";
    throw TraceValidationError(msg.str());
  }
  return trace;
}

BlackboxModel::BlackboxModel(BlackboxFunction func) : BlackboxModel(std::move(func), Settings{}) {}

BlackboxModel::BlackboxModel(BlackboxFunction func, Settings settings)
    : func_(std::move(func)), settings_(settings) {
  if (!func_) throw ValidationError("blackbox function is empty");
  if (settings_.grid_points < 2) throw ValidationError("blackbox grid needs at least two points");
}

Trace BlackboxModel::simulate(const SimulationRequest& request) {
  SimulationInput input;
  input.static_params = request.static_params;
  if (settings_.mode == InputMode::ControlPoints && !request.signals.empty()) {
    const auto& first = request.signals.front();
    for (const auto& s : request.signals) {
      if (s.control_values().size() != first.control_values().size()) {
        throw ValidationError("control-point mode requires every signal to have the same number of control points");
      }
      input.signal_values.push_back(s.control_values());
    }
    input.times = first.control_times();
  } else {
    input.times = time_grid(request.interval, settings_.grid_points);
    for (const auto& s : request.signals) {
      std::vector<double> row(input.times.size());
      std::transform(input.times.begin(), input.times.end(), row.begin(), [&](double t) { return s.at(t); });
      input.signal_values.push_back(std::move(row));
    }
  }
  return blackbox_simulate(func_, input, request.interval);
}

// ── ODE ─────────────────────────────────────────────────────────────────────

namespace {

std::vector<double> inputs_at(std::span<const Interpolator> signals, double t) {
  std::vector<double> u(signals.size());
  for (std::size_t i = 0; i < signals.size(); ++i) u[i] = signals[i].at(t);
  return u;
}

// y + h·k
std::vector<double> axpy(std::span<const double> y, double h, std::span<const double> k) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * k[i];
  return out;
}

}  // namespace

Trace ode_simulate(const DerivativeFunction& derivative, std::span<const double> initial_state,
                   Interval interval, std::span<const Interpolator> signals, double step) {
  check_interval(interval, "simulation");
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("integration step must be positive");
  const double length = interval.width();
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(length / step - 1e-9)));
  const double h = length / static_cast<double>(steps);

  auto f = [&](double t, std::span<const double> x) {
    auto dx = derivative(t, x, inputs_at(signals, t));
    if (dx.size() != x.size()) {
      throw SimulationError("derivative returned dimension " + std::to_string(dx.size()) +
                            " for a state of dimension " + std::to_string(x.size()));
    }
    return dx;
  };

  std::vector<double> times;
  std::vector<std::vector<double>> states;
  times.reserve(steps + 1);
  states.reserve(steps + 1);
  std::vector<double> x(initial_state.begin(), initial_state.end());
  times.push_back(interval.lower);
  states.push_back(x);

  for (std::size_t m = 0; m < steps; ++m) {
    const double t = interval.lower + h * static_cast<double>(m);
    const auto k1 = f(t, x);
    const auto k2 = f(t + h / 2, axpy(x, h / 2, k1));
    const auto k3 = f(t + h / 2, axpy(x, h / 2, k2));
    const auto k4 = f(t + h, axpy(x, h, k3));
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    const double t_next = m + 1 == steps ? interval.upper : interval.lower + h * static_cast<double>(m + 1);
    if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
      std::ostringstream msg;
      msg << "state became non-finite at t = " << t_next;
      throw SimulationError(msg.str());
    }
    times.push_back(t_next);
    states.push_back(x);
  }
  return Trace(std::move(times), std::move(states));
}

OdeModel::OdeModel(DerivativeFunction derivative) : OdeModel(std::move(derivative), Settings{}) {}

OdeModel::OdeModel(DerivativeFunction derivative, Settings settings)
    : derivative_(std::move(derivative)), settings_(std::move(settings)) {
  if (!derivative_) throw ValidationError("derivative function is empty");
  if (settings_.step && !(*settings_.step > 0.0)) throw ValidationError("integration step must be positive");
}

Trace OdeModel::simulate(const SimulationRequest& request) {
  const double step = settings_.step.value_or(request.interval.width() / 1000.0);
  std::vector<double> x0 = settings_.initial_state ? settings_.initial_state(request.static_params)
                                                   : request.static_params;
  try {
    return ode_simulate(derivative_, x0, request.interval, request.signals, step);
  } catch (const SimulationError&) {
    throw;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw SimulationError(std::string("ODE derivative failed: ") + e.what());
  }
}

}  // namespace falsify
