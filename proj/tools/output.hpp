#pragma once

// CSV and JSON renderings of run results, and readers for both.

#include "falsify/runner.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace falsify::cli {

/// One row per evaluation: run_index, iteration, sample_0..sample_{d-1},
/// robustness. Numbers in shortest round-trip form; infinities as inf/-inf.
void write_csv(std::ostream& out, const std::vector<RunResult>& results);

/// Array of run records. Non-finite numbers are written as the strings
/// "inf", "-inf" and "nan" since JSON has no literal for them.
void write_json(std::ostream& out, const std::vector<RunResult>& results);

/// Histories per run, indexed by run_index. Throws ValidationError when the
/// header or a row is malformed.
std::vector<std::vector<Evaluation>> read_csv(std::istream& in);

/// Inverse of write_json. run_time is restored, failures keep sample and message.
std::vector<RunResult> read_json(std::istream& in);

}  // namespace falsify::cli
