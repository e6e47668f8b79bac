#pragma once

// Seeded verification battery. Each suite is deterministic for a given seed
// and returns one summary row plus counterexample dumps on failure.

#include <optional>
#include <string>
#include <vector>

namespace maxplus::cli {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  std::vector<std::string> dumps;
};

struct SuiteOptions {
  unsigned long long seed = 1;
  bool quick = false;
  // Replaces every pass/fail threshold when set (harness self-test).
  std::optional<double> tol;
};

SuiteResult suite_exactness(const SuiteOptions& opt);
SuiteResult suite_solver_agreement(const SuiteOptions& opt);
SuiteResult suite_propagator(const SuiteOptions& opt);
SuiteResult suite_pruning_soundness(const SuiteOptions& opt);
SuiteResult suite_maxplus_linearity(const SuiteOptions& opt);
SuiteResult suite_weak_duality(const SuiteOptions& opt);
SuiteResult suite_bundle_model(const SuiteOptions& opt);
SuiteResult suite_smoothing(const SuiteOptions& opt);

/// All of the above, in a fixed order.
std::vector<SuiteResult> run_battery(const SuiteOptions& opt);

}  // namespace maxplus::cli
