#pragma once

#include "falsify/error.hpp"
#include "falsify/monitor.hpp"
#include "falsify/optim.hpp"
#include "falsify/sut.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace falsify {

/// A time-varying input chosen by the optimizer through its control points.
struct SignalOptions {
  Interval bound;
  std::size_t control_points = 1;
  InterpolationKind interpolation = InterpolationKind::PiecewiseConstant;
};

enum class ErrorPolicy {
  /// A failed simulation ends the run; the partial history is kept.
  AbortRun,
  /// A failed simulation is logged and scored +inf; the run continues.
  RecordAndContinue,
};

struct Options {
  std::vector<Interval> static_params;
  std::vector<SignalOptions> signals;
  std::size_t iterations = 400;
  std::size_t runs = 1;
  Behavior behavior = Behavior::Falsification;
  Interval interval{0.0, 1.0};
  std::uint64_t seed = 0;
  ErrorPolicy error_policy = ErrorPolicy::AbortRun;
  /// Honored only when the model reports itself reentrant.
  bool parallel_runs = false;

  /// Throws ValidationError describing the first violated invariant.
  void validate() const;
};

/// Sample dimension: static parameters plus every signal's control points.
std::size_t sample_dimension(const Options& options);

/// Static bounds followed by each signal's value bound repeated once per control point.
SearchSpace search_space(const Options& options);

struct Decomposition {
  std::vector<double> static_params;
  std::vector<Interpolator> signals;
};

/// Splits a flat sample into static parameters (first block) and one block
/// of control values per signal, in declaration order, each turned into an
/// interpolator over options.interval. Throws ValidationError on a dimension
/// mismatch.
Decomposition decompose_sample(std::span<const double> sample, const Options& options);

struct Failure {
  std::vector<double> sample;
  std::string message;

  friend bool operator==(const Failure&, const Failure&) = default;
};

/// Thrown by an objective built with ErrorPolicy::AbortRun when the
/// simulation fails.
class RunAborted : public SimulationError {
 public:
  RunAborted(std::vector<double> sample, const std::string& message);
  const std::vector<double>& sample() const noexcept { return sample_; }

 private:
  std::vector<double> sample_;
};

/// sample -> decompose -> simulate -> robustness at sample 0.
///
/// Simulation failures (SimulationError, TraceValidationError included) follow
/// options.error_policy: RecordAndContinue appends to `failures` and returns
/// +inf; AbortRun throws RunAborted. `failures` may be null.
Objective make_objective(Model& model, const Specification& spec, const Options& options,
                         std::vector<Failure>* failures = nullptr);

struct RunResult {
  std::vector<Evaluation> history;
  /// Absent only when a run was aborted before its first evaluation completed.
  std::optional<Evaluation> best;
  double run_time = 0.0;
  bool falsified = false;
  bool aborted = false;
  std::vector<Failure> failures;
};

/// Entry point: validates the options, then runs `options.runs` independent
/// searches with seeds options.seed + run_index and returns one result per
/// run, in run order.
std::vector<RunResult> staliro(const Specification& spec, Model& model, const Optimizer& optimizer,
                               const Options& options);

}  // namespace falsify
