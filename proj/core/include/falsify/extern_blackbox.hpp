#pragma once

#include "falsify/sut.hpp"

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace falsify {

/// A system under test living in another process.
///
/// Wire protocol, one child process per simulate call. The parent writes to
/// the child's standard input
///
///     line 1      X  (static parameters, space separated, possibly empty)
///     line 2      T  (time grid)
///     line 3...   U  (one line per input signal, one value per time)
///
/// and closes it. The child answers on standard output with
///
///     line 1      timestamps
///     line 2...   one state row per timestamp
///
/// Numbers are written in shortest round-trip decimal form; "inf", "-inf" and
/// "nan" are accepted on input.
struct ExternCommand {
  /// argv; the first entry is looked up on PATH.
  std::vector<std::string> argv;
  std::chrono::duration<double> timeout{60.0};
};

std::string encode_simulation_input(const SimulationInput& input);

/// Throws SimulationError for empty or non-numeric output. Row-shape problems
/// are left for Trace validation.
SimulationOutput decode_simulation_output(std::string_view text);

/// Blackbox function that runs `command` once per call. A nonzero exit
/// (message carries the child's stderr), malformed output or a timeout raise
/// SimulationError; ragged output raises TraceValidationError once validated
/// by blackbox_simulate.
BlackboxFunction extern_blackbox(ExternCommand command);

/// Output of one child process run.
struct ProcessResult {
  int exit_code = 0;  // 128 + signal number when killed by a signal
  std::string out;
  std::string err;
};

/// Runs `argv` with `input` on stdin and collects stdout/stderr. Throws
/// SimulationError when the process cannot be started or exceeds `timeout`
/// (it is killed first).
ProcessResult run_process(const std::vector<std::string>& argv, std::string_view input,
                          std::chrono::duration<double> timeout);

}  // namespace falsify
