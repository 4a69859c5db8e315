#pragma once

/**
 * @file quotient.hpp
 * @brief Fermat quotients q_p(u) = ((u^(p-1) mod p^2) - 1) / p, single and
 * batched, plus the statistics built on a table of consecutive values:
 * image size, value histograms, collision counts and the smallest nonzero
 * quotient.
 *
 * Values are undefined when p | u. Tables carry an explicit sentinel for
 * those positions; it is never confused with the value 0 (which q_p(1) takes).
 */

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fermatq/arith.hpp"

namespace fermatq {

/// A Fermat quotient in [0, p-1], or undefined when p divides the argument.
class QuotientValue {
 public:
  static constexpr std::uint32_t kUndefined = 0xFFFFFFFFu;

  constexpr QuotientValue() = default;
  static constexpr QuotientValue undefined() { return QuotientValue(); }
  static constexpr QuotientValue of(std::uint32_t v) { return QuotientValue(v); }
  static constexpr QuotientValue from_raw(std::uint32_t raw) { return QuotientValue(raw); }

  constexpr bool defined() const { return raw_ != kUndefined; }
  /// Precondition: defined().
  constexpr std::uint32_t value() const { return raw_; }
  constexpr std::uint32_t raw() const { return raw_; }

  friend constexpr bool operator==(QuotientValue, QuotientValue) = default;

 private:
  constexpr explicit QuotientValue(std::uint32_t raw) : raw_(raw) {}
  std::uint32_t raw_ = kUndefined;
};

/// Default cap on quotient table length (4 bytes per entry, 1 GiB).
inline constexpr u64 kDefaultTableCap = u64{1} << 28;

QuotientValue fermat_quotient(const OddPrime& p, u64 u);

/// q_p(1..N) computed with one modular power per prime n <= N; composite
/// entries follow from q_p(uv) = q_p(u) + q_p(v) (mod p).
class QuotientTable {
 public:
  /// Throws ArgumentError if N == 0, BudgetExceeded if N > cap.
  QuotientTable(const OddPrime& p, u64 N, u64 cap = kDefaultTableCap);

  const OddPrime& prime() const { return p_; }
  u64 size() const { return entries_.size(); }

  /// Quotient at n, 1 <= n <= size().
  QuotientValue operator[](u64 n) const { return QuotientValue::from_raw(entries_[n - 1]); }

  /// Raw entries for n = 1..N, sentinel QuotientValue::kUndefined at multiples of p.
  std::span<const std::uint32_t> raw() const { return entries_; }

  /// Binary dump: "FQT1", p and N as little-endian u64, then N little-endian
  /// u32 entries with 0xFFFFFFFF marking undefined positions.
  void write_binary(std::ostream& out) const;
  static QuotientTable read_binary(std::istream& in);

  /// Overwrites one raw entry. Used by the self-test fault injection only.
  void corrupt_entry_for_testing(u64 n, std::uint32_t raw) { entries_[n - 1] = raw; }

 private:
  QuotientTable(const OddPrime& p, std::vector<std::uint32_t> entries)
      : p_(p), entries_(std::move(entries)) {}

  OddPrime p_;
  std::vector<std::uint32_t> entries_;
};

/// Dense counts indexed by residue 0..p-1.
struct ResidueHistogram {
  u64 p = 0;
  std::vector<u64> counts;
  u64 total = 0;

  u64 nonzero_cells() const;
  u64 sum_of_squares() const;
};

/// Least n in [2, cap] with q_p(n) defined and nonzero.
std::optional<u64> smallest_nonzero(const OddPrime& p, u64 cap);

/// I_p(N): number of distinct defined values in the table.
u64 image_size(const QuotientTable& table);

/// R_p(N, a) for every a; total counts n <= N coprime to p.
ResidueHistogram value_histogram(const QuotientTable& table);

/// Q_p(N, a): counts over primes l <= N with l != p.
ResidueHistogram prime_value_histogram(const OddPrime& p, u64 N, u64 cap = kDefaultTableCap);

/// #W_p(N): ordered pairs (u, v), both defined, with q_p(u) = q_p(v).
u64 collision_count(const QuotientTable& table);

/// #W_p(n) for every n = 1..table.size(); element n-1 holds #W_p(n).
std::vector<u64> collision_profile(const QuotientTable& table);

struct Rational {
  u64 num = 0;
  u64 den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  u64 ceil() const { return (num + den - 1) / den; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// (sum counts)^2 / sum counts^2, reduced. This never exceeds the number of
/// nonzero cells. Throws ArgumentError on an empty histogram.
Rational cauchy_lower_bound(const ResidueHistogram& hist);

}  // namespace fermatq
