#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace idqa::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  /// Wall-time budget; exceeding it fails the criterion.
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  /// Worker threads for the sweep criterion.
  int workers = 1;
  std::uint64_t seed = 20190611;
  /// Criteria to run (1-10); empty means all.
  std::vector<int> only;
  /// Called after each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "[PASS] 3 limiting cases (12.1 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace idqa::verify
