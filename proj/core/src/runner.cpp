#include "falsify/runner.hpp"

#include "falsify/error.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <sstream>

namespace falsify {

void Options::validate() const {
  if (static_params.empty() && signals.empty()) {
    throw ValidationError(
        "options must provide either static_params or signals: the search space would be empty");
  }
  if (iterations < 1) throw ValidationError("iterations must be at least 1");
  if (runs < 1) throw ValidationError("runs must be at least 1");
  if (!std::isfinite(interval.lower) || !std::isfinite(interval.upper) || !(interval.lower < interval.upper)) {
    throw ValidationError("interval start must be less than interval end");
  }
  for (std::size_t i = 0; i < static_params.size(); ++i) {
    const auto& b = static_params[i];
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !(b.lower < b.upper)) {
      throw ValidationError("static parameter " + std::to_string(i) + " needs lower < upper");
    }
  }
  for (std::size_t i = 0; i < signals.size(); ++i) {
    const auto& s = signals[i];
    if (!std::isfinite(s.bound.lower) || !std::isfinite(s.bound.upper) || !(s.bound.lower < s.bound.upper)) {
      throw ValidationError("signal " + std::to_string(i) + " needs lower < upper");
    }
    if (s.control_points < 1) {
      throw ValidationError("signal " + std::to_string(i) + " needs at least one control point");
    }
    if (s.interpolation == InterpolationKind::PiecewiseLinear && s.control_points < 2) {
      throw ValidationError("piecewise-linear signal " + std::to_string(i) + " needs at least two control points");
    }
  }
}

std::size_t sample_dimension(const Options& options) {
  std::size_t d = options.static_params.size();
  for (const auto& s : options.signals) d += s.control_points;
  return d;
}

SearchSpace search_space(const Options& options) {
  std::vector<Interval> bounds = options.static_params;
  for (const auto& s : options.signals) bounds.insert(bounds.end(), s.control_points, s.bound);
  return SearchSpace(std::move(bounds));
}

Decomposition decompose_sample(std::span<const double> sample, const Options& options) {
  if (sample.size() != sample_dimension(options)) {
    throw ValidationError("sample has dimension " + std::to_string(sample.size()) + ", options expect " +
                          std::to_string(sample_dimension(options)));
  }
  Decomposition out;
  auto it = sample.begin();
  const auto n_static = static_cast<std::ptrdiff_t>(options.static_params.size());
  out.static_params.assign(it, it + n_static);
  it += n_static;
  for (const auto& s : options.signals) {
    const auto n = static_cast<std::ptrdiff_t>(s.control_points);
    out.signals.emplace_back(s.interpolation, options.interval, std::vector<double>(it, it + n));
    it += n;
  }
  return out;
}

RunAborted::RunAborted(std::vector<double> sample, const std::string& message)
    : SimulationError(message), sample_(std::move(sample)) {}

Objective make_objective(Model& model, const Specification& spec, const Options& options,
                         std::vector<Failure>* failures) {
  return [&model, &spec, options, failures](std::span<const double> sample) -> double {
    auto parts = decompose_sample(sample, options);
    std::optional<Trace> trace;
    try {
      trace.emplace(model.simulate(SimulationRequest{std::move(parts.static_params), std::move(parts.signals),
                                                     options.interval}));
    } catch (const SimulationError& e) {
      std::vector<double> s(sample.begin(), sample.end());
      if (failures) failures->push_back(Failure{s, e.what()});
      if (options.error_policy == ErrorPolicy::AbortRun) throw RunAborted(std::move(s), e.what());
      return kInfinity;
    }
    return spec.evaluate(*trace);
  };
}

namespace {

RunResult execute_run(const Specification& spec, Model& model, const Optimizer& optimizer, const Options& options,
                      std::size_t run_index) {
  RunResult result;
  std::vector<Evaluation> log;
  const auto base = make_objective(model, spec, options, &result.failures);
  const Objective objective = [&](std::span<const double> sample) {
    const double r = base(sample);
    log.push_back(Evaluation{{sample.begin(), sample.end()}, r});
    return r;
  };
  const SearchSpace space = search_space(options);
  const OptimizeSettings settings{options.iterations, options.behavior, options.seed + run_index};

  const auto start = std::chrono::steady_clock::now();
  try {
    auto outcome = optimizer.optimize(objective, space, settings);
    result.history = std::move(outcome.history);
    if (!result.history.empty()) result.best = std::move(outcome.best);
  } catch (const RunAborted&) {
    result.aborted = true;
    result.history = std::move(log);
    if (!result.history.empty()) {
      const Evaluation* best = &result.history.front();
      for (const auto& e : result.history) {
        if (e.robustness < best->robustness) best = &e;
      }
      result.best = *best;
    }
  }
  result.run_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.falsified = result.best && result.best->robustness < 0.0;
  return result;
}

}  // namespace

std::vector<RunResult> staliro(const Specification& spec, Model& model, const Optimizer& optimizer,
                               const Options& options) {
  options.validate();
  (void)search_space(options);

  std::vector<RunResult> results;
  results.reserve(options.runs);
  if (options.parallel_runs && model.reentrant() && options.runs > 1) {
    std::vector<std::future<RunResult>> pending;
    for (std::size_t r = 0; r < options.runs; ++r) {
      pending.push_back(std::async(std::launch::async, [&, r] { return execute_run(spec, model, optimizer, options, r); }));
    }
    for (auto& f : pending) results.push_back(f.get());
  } else {
    for (std::size_t r = 0; r < options.runs; ++r) results.push_back(execute_run(spec, model, optimizer, options, r));
  }
  return results;
}

}  // namespace falsify
