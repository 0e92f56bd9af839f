#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace jorbit {

struct CheckResult {
  std::string id;
  bool passed = false;
  double observed = 0.0;  // worst residual / deviation seen
  double bound = 0.0;     // what it was held against
  std::string details;
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  // Scales the sampling volume of the randomized checks; 0 keeps defaults.
  int trials = 0;
  // Restrict to checks touching this catalog name ("" = everything).
  std::string algebraFilter;
};

std::vector<CheckResult> runAcceptance(const VerifyOptions& opts);

// Canonical serialization used by the determinism check.
std::string acceptanceReportText(const std::vector<CheckResult>& results,
                                 const VerifyOptions& opts);

}  // namespace jorbit
