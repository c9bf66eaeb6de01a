#pragma once

#include <iosfwd>

namespace borngame::cli {

enum ExitCode : int {
  kOk = 0,
  kVerdictFail = 1,
  kConfigError = 2,
  kBudgetExceeded = 3,
  kIoError = 4,
};

/// Entry point shared by the executable and the tests.
/// Subcommands: run, oracle, compare, langevin.
int run(int argc, const char* const argv[], std::ostream& out, std::ostream& err);

}  // namespace borngame::cli
