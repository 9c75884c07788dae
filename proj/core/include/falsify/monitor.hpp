#pragma once

#include "falsify/stl.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace falsify {

/// Timestamped sequence of state vectors.
///
/// Invariants (checked by the constructor, which throws TraceValidationError):
/// at least one sample, strictly increasing finite timestamps, one finite
/// state vector of uniform dimension per timestamp.
class Trace {
 public:
  Trace(std::vector<double> timestamps, std::vector<std::vector<double>> states);

  std::size_t size() const noexcept { return timestamps_.size(); }
  std::size_t dimension() const noexcept { return states_.front().size(); }
  const std::vector<double>& timestamps() const noexcept { return timestamps_; }
  const std::vector<std::vector<double>>& states() const noexcept { return states_; }
  double time(std::size_t i) const { return timestamps_[i]; }
  std::span<const double> state(std::size_t i) const { return states_[i]; }

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<double> timestamps_;
  std::vector<std::vector<double>> states_;
};

/// Signed Euclidean distance from `state` to the boundary of the half-space,
/// positive inside. Throws EvaluationError on a dimension mismatch.
double predicate_robustness(const LinearPredicate& p, std::span<const double> state);

/// Discrete-time space robustness of `f` at sample `at`.
///
/// Temporal operators quantify over the samples j with t_j - t_at inside the
/// bound. Empty windows give the vacuity sentinels: -inf for eventually and
/// until, +inf for always. Next at the final sample is -inf.
///
/// Throws EvaluationError for an unresolved predicate name, a predicate whose
/// dimension differs from the trace, or `at` out of range.
double evaluate(const Formula& f, const PredicateMap& preds, const Trace& trace, std::size_t at = 0);

/// Robustness of `f` at every sample of the trace.
std::vector<double> robustness_signal(const Formula& f, const PredicateMap& preds, const Trace& trace);

/// Qualitative satisfaction of `f` at sample `at`. An independent recursion
/// that shares no code with evaluate(); used as a test oracle.
bool evaluate_boolean(const Formula& f, const PredicateMap& preds, const Trace& trace,
                      std::size_t at = 0);

/// Anything that maps a trace to a robustness value. Negative means the trace
/// violates the requirement.
class Specification {
 public:
  virtual ~Specification() = default;
  virtual double evaluate(const Trace& trace) const = 0;
};

/// STL requirement evaluated with the built-in monitor at sample 0.
class StlSpecification final : public Specification {
 public:
  /// Checks that every predicate referenced by the formula resolves.
  StlSpecification(FormulaPtr formula, PredicateMap predicates);

  /// Parses `requirement` against the map's variables and registers the inline
  /// comparison predicates.
  static StlSpecification parse(std::string_view requirement, PredicateMap predicates);

  double evaluate(const Trace& trace) const override;

  const Formula& formula() const noexcept { return *formula_; }
  const PredicateMap& predicates() const noexcept { return predicates_; }

 private:
  FormulaPtr formula_;
  PredicateMap predicates_;
};

}  // namespace falsify
