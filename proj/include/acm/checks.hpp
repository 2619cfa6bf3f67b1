#pragma once

// The eight acceptance criteria as runnable checks. Each check is
// self-contained: fixed parameters, fixed seeds, a wall-clock budget.

#include <string>
#include <vector>

namespace acm::checks {

struct CheckResult {
  int id = 0;
  std::string name;
  /// Every numeric condition held.
  bool numeric_pass = false;
  double seconds = 0.0;
  double budget_s = 0.0;
  /// Numbers behind the verdict, one clause per condition.
  std::string detail;
  /// Diagnostics that do not enter the verdict.
  std::string info;

  [[nodiscard]] bool passed() const { return numeric_pass && seconds <= budget_s; }
};

struct CheckInfo {
  int id;
  const char* name;
  double budget_s;
};

/// All eight checks in id order.
const std::vector<CheckInfo>& catalogue();

/// Runs one check. Throws std::out_of_range for an unknown id.
CheckResult run_check(int id);

/// "[PASS] 3 name (12.3 s / 600 s): detail".
std::string format_result(const CheckResult& r);

}  // namespace acm::checks
