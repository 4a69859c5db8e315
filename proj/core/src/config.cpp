#include "fermatq/config.hpp"

#include <cstdlib>

#include "fermatq/errors.hpp"

#ifndef FERMATQ_VERSION_STRING
#define FERMATQ_VERSION_STRING "0.0.0"
#endif

namespace fermatq {

namespace {

std::uint64_t parse_positive(const char* name, const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw ArgumentError(std::string(name) + ": expected a positive integer, got '" + text + "'");
  }
  if (used != text.size() || v == 0 || text[0] == '-') {
    throw ArgumentError(std::string(name) + ": expected a positive integer, got '" + text + "'");
  }
  return v;
}

}  // namespace

RunConfig resolve_config(const ConfigOverrides& flags, const EnvLookup& env) {
  RunConfig c;
  if (const char* v = env("FERMATQ_THREADS")) c.threads = static_cast<unsigned>(parse_positive("FERMATQ_THREADS", v));
  if (const char* v = env("FERMATQ_BUDGET")) c.budget_ops = parse_positive("FERMATQ_BUDGET", v);
  if (const char* v = env("FERMATQ_MEMCAP")) c.memory_cap_bytes = parse_positive("FERMATQ_MEMCAP", v);

  if (flags.threads) {
    if (*flags.threads == 0) throw ArgumentError("--threads must be >= 1");
    c.threads = *flags.threads;
  }
  if (flags.budget_ops) {
    if (*flags.budget_ops == 0) throw ArgumentError("--budget must be >= 1");
    c.budget_ops = *flags.budget_ops;
  }
  if (flags.memory_cap_bytes) {
    if (*flags.memory_cap_bytes == 0) throw ArgumentError("--memcap must be >= 1");
    c.memory_cap_bytes = *flags.memory_cap_bytes;
  }
  if (flags.output_path) c.output_path = *flags.output_path;
  if (flags.format) c.format = *flags.format;
  if (flags.seed) c.seed = *flags.seed;
  return c;
}

RunConfig resolve_config(const ConfigOverrides& flags) {
  return resolve_config(flags, [](const char* name) { return std::getenv(name); });
}

std::string tool_version() { return FERMATQ_VERSION_STRING; }

}  // namespace fermatq
