#pragma once

#include "kemeny/error.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace kemeny::cli {

/// Exit statuses of the `kemeny` tool.
enum ExitCode : int {
  kOk = 0,
  kParse = 2,
  kValidation = 3,
  kInfeasible = 4,
  kBudget = 5,
  kNumeric = 6,
};

int exit_code_for(ErrorCode code);

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kemeny::cli
