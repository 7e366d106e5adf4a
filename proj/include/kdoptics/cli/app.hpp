#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kdoptics::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kPreconditionError = 3,
  kBudgetError = 4,
};

/// Runs `kdoptics <subcommand> [--config f] [--out dir] [--seed n] [--threads n]`.
/// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kdoptics::cli
