#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rookmix::cli {

enum ExitCode : int {
  kOk = 0,
  kFailed = 1,
  kUsage = 2,
  kSkipped = 3,
  kIoError = 4,
  kResource = 5,
};

/// Runs the command line `args` (without the program name). Data goes to
/// `out` unless --out names a file; diagnostics and stdout manifests go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rookmix::cli
