#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace falsify {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed requirement text. Carries the byte offset of the offending token
/// and the set of tokens that would have been accepted there.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t position, std::vector<std::string> expected = {});

  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

/// Invalid options, bounds, predicates or configuration. Raised before any
/// simulation takes place.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Robustness evaluation failed: unresolved predicate, dimension mismatch,
/// evaluation index out of range.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// The system under test failed to produce a trace.
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// The system under test produced a trace that violates the trace invariants.
class TraceValidationError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

}  // namespace falsify
