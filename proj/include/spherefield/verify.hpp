#pragma once

// Self-check suites run by `spherefield verify`. Each suite is a set of
// pass/fail lines with the measured error next to its tolerance.

#include <cstdint>
#include <string>
#include <vector>

namespace spherefield {

struct CheckLine {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::vector<CheckLine> lines;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  /// Multiplies every tolerance; 1 is the documented setting.
  double tol_scale = 1.0;
};

/// addition, mittag_leffler, caputo, simon, laplace, clock, bm, covariance,
/// dependence, resolvent, roundtrip, representation.
const std::vector<std::string>& suite_names();

/// Throws ConfigError for an unknown name.
SuiteResult run_suite(const std::string& name, const VerifyOptions& options);

/// SPHEREFIELD_TOL_SCALE if set (must parse as a finite number >= 0), else 1.
double tol_scale_from_env();

}  // namespace spherefield
