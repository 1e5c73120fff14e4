#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fading {

struct AcceptanceOptions {
  std::uint64_t seed = 7;
  /// Worker threads for kNN searches. Results do not depend on it.
  unsigned workers = 1;
  /// Criteria to run (1..10); empty runs all of them.
  std::vector<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  /// Measured quantities and the tolerances they were held to.
  std::string detail;
};

CriterionResult run_criterion(int id, const AcceptanceOptions& options);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// "AC3 PASS prediction ...: detail" style line.
std::string format_result(const CriterionResult& result);

}  // namespace fading
