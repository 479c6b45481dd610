#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bojtc::cli {

enum ExitCode
{
  kSuccess = 0,
  kPipelineError = 1,
  kUsageError = 2,
};

/// Entry point of the bojtc tool. args[0] is the program name.
int runCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

} // namespace bojtc::cli
