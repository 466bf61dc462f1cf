#pragma once

#include <ostream>

namespace bhs::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitDivergence = 3,
  kExitIo = 4,
};

/// Entry point of the bhsplit tool. Tables go to `out` unless --out is
/// given; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bhs::app
