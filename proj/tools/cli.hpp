#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlms/scenario.hpp"

namespace dlms::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kUsageError = 2,
  kDivergence = 3,
};

/// Builtin name, or else a path to a scenario file (parsed, not validated).
Scenario load_scenario(std::string_view ref);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dlms::cli
