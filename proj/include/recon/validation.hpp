#pragma once

#include <functional>
#include <string>
#include <vector>

namespace recon::validation {

struct CriterionResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  std::string id;
  std::string name;
  std::function<CriterionResult()> run;
};

/// The reconciliation suite, one entry per acceptance criterion (8 is split in two).
/// Tolerances and horizons are fixed inside each check.
const std::vector<Criterion>& criteria();

/// Runs the criteria whose id is in `only` (all when empty), timing each one. A check
/// that throws is reported as failed with the exception message.
std::vector<CriterionResult> run_suite(const std::vector<std::string>& only = {});

/// "PASS  5  optimal rate ...  (1.2 s)  detail"
std::string format_result(const CriterionResult& result);

}  // namespace recon::validation
