#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdoptics/cli/config.hpp"

namespace kdoptics::cli {

struct RunContext {
  std::filesystem::path out_dir;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  std::vector<std::string> log;  ///< human-readable lines for stdout
  /// Results outside their error budget; the run still writes its outputs.
  std::vector<std::string> budget_failures;
};

/// Reads its parameters from `cfg`, writes tabular files into ctx.out_dir and
/// returns the scalar results.
using Scenario = std::function<nlohmann::json(Section& cfg, RunContext& ctx)>;

const std::map<std::string, Scenario>& scenarios();

}  // namespace kdoptics::cli
