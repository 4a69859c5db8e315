#pragma once

/**
 * @file arith.hpp
 * @brief Primes, factorization, arithmetic functions and 64-bit modular
 * arithmetic with 128-bit intermediate products.
 *
 * Everything here is a pure function on value types. The smallest-prime-factor
 * table used by factorize() is built once on first use and is read-only
 * afterwards, so concurrent callers need no coordination.
 */

#include <cstdint>
#include <utility>
#include <vector>

namespace fermatq {

using u64 = std::uint64_t;
__extension__ typedef unsigned __int128 u128;

inline constexpr u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

/// base^exponent mod modulus. Requires 1 <= modulus < 2^63.
u64 mod_pow(u64 base, u64 exponent, u64 modulus);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(u64 n);

/// Ascending list of all primes <= limit.
std::vector<u64> primes_up_to(u64 limit);

/// (prime, multiplicity) pairs sorted by prime.
class Factorization {
 public:
  using Term = std::pair<u64, unsigned>;

  Factorization() = default;
  explicit Factorization(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Product of prime^multiplicity; 1 for the empty factorization.
  u64 value() const;

  /// All positive divisors, ascending.
  std::vector<u64> divisors() const;

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  std::vector<Term> terms_;
};

/// Throws ArgumentError for n = 0.
Factorization factorize(u64 n);

struct ArithmeticFunctions {
  u64 phi;   // Euler totient
  int mu;    // Moebius
  u64 tau;   // divisor count
};

ArithmeticFunctions arithmetic_functions(const Factorization& f);
/// Throws ArgumentError for n = 0.
ArithmeticFunctions arithmetic_functions(u64 n);

/// Least k >= 1 with a^k = 1 (mod modulus). Throws if gcd(a, modulus) != 1.
u64 multiplicative_order(u64 a, u64 modulus);

/// An odd prime below 2^31 together with its square.
class OddPrime {
 public:
  static constexpr u64 kMax = u64{1} << 31;

  /// Throws ArgumentError unless p is an odd prime in [3, 2^31).
  explicit OddPrime(u64 p);

  u64 value() const { return p_; }
  u64 squared() const { return p_squared_; }

  /// Factorization of p - 1, computed on construction.
  const Factorization& group_order_factors() const { return pm1_factors_; }

  friend bool operator==(const OddPrime& a, const OddPrime& b) { return a.p_ == b.p_; }

 private:
  u64 p_;
  u64 p_squared_;
  Factorization pm1_factors_;
};

/// True iff a mod p generates the unit group mod p (false when p | a).
bool is_primitive_root(u64 a, const OddPrime& p);

/// Least positive primitive root mod p.
u64 least_primitive_root(const OddPrime& p);

}  // namespace fermatq
