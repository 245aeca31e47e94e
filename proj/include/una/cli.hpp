#pragma once

#include <ostream>
#include <span>
#include <string>

namespace una::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kBadFlags = 2,
  kInsufficientData = 3,
};

/// Runs one invocation (`args[0]` is the program name). Results go to `out`,
/// diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Worker cap from UNA_THREADS, defaulting to the hardware concurrency.
std::size_t thread_budget();

}  // namespace una::cli
