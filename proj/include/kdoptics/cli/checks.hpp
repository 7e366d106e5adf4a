#pragma once

#include <string>
#include <vector>

namespace kdoptics::cli {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// The twelve reproduction checks, in order. Each carries its measured errors
/// and wall time; time limits are part of the pass condition where set.
std::vector<CheckResult> run_checks(unsigned threads = 1);

/// "PASS", "FAIL" line for one result.
std::string format_check(const CheckResult& r);

}  // namespace kdoptics::cli
