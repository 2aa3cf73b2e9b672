#pragma once

// Cross-module self-checks runnable from the CLI: every check compares two
// independent computation paths (closed forms, direct sums, alternative
// integrators) and reports a measured deviation against a fixed tolerance.

#include <cstdint>
#include <string>
#include <vector>

namespace skg {

enum class ValidationLevel { Fast, Full };

struct CheckResult {
  std::string name;       // module.check
  bool passed = false;
  double measured = 0.0;  // the deviation or statistic the check bounds
  double tolerance = 0.0;
  std::string detail;     // deterministic one-line context
};

struct ValidationReport {
  ValidationLevel level = ValidationLevel::Fast;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

// Fast runs the small-lattice oracles (seconds); Full adds the nominal-size
// properties: decay envelope, integral-equation vs stepping cross-check,
// remainder scaling, third-order diagram equivalence, thermalization and
// bimodality of the symmetry-breaking run.
ValidationReport run_validation(ValidationLevel level, std::uint64_t seed);

// CSV serialization: check,pass,measured,tolerance,detail. Byte-stable for a
// fixed (level, seed).
std::string report_csv(const ValidationReport& report);

}  // namespace skg
