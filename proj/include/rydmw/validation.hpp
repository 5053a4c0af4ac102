#pragma once

// Built-in cross-checks run by `rydmw validate`.

#include <string>
#include <vector>

namespace rydmw {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick versions of the oracle and invariant checks (a few seconds).
std::vector<CheckResult> run_validation();

}  // namespace rydmw
