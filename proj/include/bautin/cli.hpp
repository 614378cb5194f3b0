#pragma once

#include <string>
#include <vector>

namespace bautin::cli {

enum ExitCode { kOk = 0, kConfigError = 2, kComputeError = 3, kIoError = 4 };

/// Entry point of the command-line tool; returns the process exit code.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace bautin::cli
