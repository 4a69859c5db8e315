#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fermatq {

struct SelftestOptions {
  std::uint64_t seed = 0x5EEDull;
  unsigned threads = 1;
  /// Test-only: flips one entry of the first quotient table checked, which
  /// must make the fermat-quotient suite fail.
  bool inject_quotient_fault = false;
};

struct SuiteOutcome {
  std::string module;
  std::uint64_t checks = 0;
  bool passed = true;
  /// Operation and inputs of the first failing check.
  std::string failure;
};

struct SelftestResult {
  std::vector<SuiteOutcome> suites;
  bool ok() const;
};

/// Runs the exact-identity and tolerance suites of every module at desk
/// scale, in a fixed order. Stops at the first failing suite. Output is a
/// function of the options only.
SelftestResult run_selftest(const SelftestOptions& options);

}  // namespace fermatq
