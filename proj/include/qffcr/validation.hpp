#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qffcr {

// Deliberate corruption for checking that the suite catches a wrong sign in
// the k=0 corner element of the structured export.
enum class Fault { none, a0_sign };

struct CheckResult {
  std::string name;
  bool pass = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string detail;  // offending parameters on failure
};

struct ValidationReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_pass() const;
};

ValidationReport run_validation(std::uint64_t seed, Fault fault = Fault::none);

// Deterministic text: no timings, fixed float formatting.
void print_report(std::ostream& os, const ValidationReport& rep);

}  // namespace qffcr
