#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "fermatq/report.hpp"

namespace fermatq {

struct RunConfig {
  unsigned threads = 1;
  std::uint64_t memory_cap_bytes = std::uint64_t{1} << 30;
  std::uint64_t budget_ops = 20'000'000'000ull;
  /// Empty means standard output.
  std::string output_path;
  OutputFormat format = OutputFormat::kCsv;
  std::uint64_t seed = 0x5EEDull;

  /// Quotient table entries permitted by the memory cap (4 bytes each).
  std::uint64_t table_cap() const { return memory_cap_bytes / 4; }
};

/// Values given on the command line; unset fields fall through.
struct ConfigOverrides {
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> memory_cap_bytes;
  std::optional<std::uint64_t> budget_ops;
  std::optional<std::string> output_path;
  std::optional<OutputFormat> format;
  std::optional<std::uint64_t> seed;
};

using EnvLookup = std::function<const char*(const char*)>;

/// Flags, then FERMATQ_THREADS / FERMATQ_BUDGET / FERMATQ_MEMCAP, then
/// defaults. Throws ArgumentError on malformed or non-positive values.
RunConfig resolve_config(const ConfigOverrides& flags, const EnvLookup& env);
RunConfig resolve_config(const ConfigOverrides& flags);

/// Version string compiled into the library.
std::string tool_version();

}  // namespace fermatq
