#pragma once

#include <functional>
#include <string>
#include <vector>

namespace leray {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// Measured quantities, deterministic for a given build.
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  /// Disables dealiasing in the skew-symmetry check (negative control).
  bool inject_skew_fault = false;
  /// Criterion ids to run; empty runs all ten.
  std::vector<int> only;
};

/// Runs the acceptance criteria in order. A criterion passes when all of its
/// checks hold and it finished within its runtime budget. Exceptions are
/// caught and reported as failures; the suite never stops early.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& opts,
    const std::function<void(const CriterionResult&)>& on_result = {});

/// `[PASS] 3 advection-oracle  <detail>`; the runtime is not part of the row.
std::string format_row(const CriterionResult& r);

}  // namespace leray
