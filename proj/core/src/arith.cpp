#include "fermatq/arith.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "fermatq/errors.hpp"

namespace fermatq {

namespace {

constexpr u64 kSpfLimit = 10'000'000;

// Linear sieve; spf[n] is the smallest prime factor of n for 2 <= n < limit.
std::vector<std::uint32_t> build_spf(u64 limit) {
  std::vector<std::uint32_t> spf(limit, 0);
  std::vector<std::uint32_t> primes;
  for (u64 i = 2; i < limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t q : primes) {
      if (q > spf[i] || i * q >= limit) break;
      spf[i * q] = q;
    }
  }
  return spf;
}

const std::vector<std::uint32_t>& spf_table() {
  static const std::vector<std::uint32_t> table = build_spf(kSpfLimit);
  return table;
}

u64 pow_mod_unchecked(u64 base, u64 exponent, u64 modulus) {
  u64 result = 1 % modulus;
  base %= modulus;
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, base, modulus);
    base = mul_mod(base, base, modulus);
    exponent >>= 1;
  }
  return result;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned r) {
  u64 x = pow_mod_unchecked(a % n, d, n);
  if (x == 0 || x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < r; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Brent's variant of Pollard rho; n is odd, composite and not a prime power of 2.
u64 pollard_rho(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    constexpr u64 m = 128;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (n < kSpfLimit) {
    const auto& spf = spf_table();
    while (n > 1) {
      out.push_back(spf[n]);
      n /= spf[n];
    }
    return;
  }
  for (u64 q : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    while (n % q == 0) {
      out.push_back(q);
      n /= q;
    }
  }
  if (n == 1) return;
  if (n < kSpfLimit) {
    factor_into(n, out);
    return;
  }
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

u64 mod_pow(u64 base, u64 exponent, u64 modulus) {
  if (modulus == 0 || modulus >= (u64{1} << 63)) {
    throw ArgumentError("mod_pow: modulus must lie in [1, 2^63), got " + std::to_string(modulus));
  }
  return pow_mod_unchecked(base, exponent, modulus);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % q == 0) return n == q;
  }
  if (n < 37 * 37) return true;
  u64 d = n - 1;
  const auto r = static_cast<unsigned>(std::countr_zero(d));
  d >>= r;
  // Witness set of Jim Sinclair, deterministic for all n < 2^64.
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    if (!miller_rabin_witness(n, a, d, r)) return false;
  }
  return true;
}

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  // Odd-only Eratosthenes; index i stands for 2i + 1.
  const u64 half = limit / 2 + 1;
  std::vector<bool> composite(half, false);
  primes.push_back(2);
  for (u64 i = 1; i < half; ++i) {
    const u64 v = 2 * i + 1;
    if (v > limit) break;
    if (composite[i]) continue;
    primes.push_back(v);
    for (u64 j = v * v / 2; j < half; j += v) composite[j] = true;
  }
  return primes;
}

Factorization::Factorization(std::vector<Term> terms) : terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end());
}

u64 Factorization::value() const {
  u64 v = 1;
  for (const auto& [q, e] : terms_) {
    for (unsigned i = 0; i < e; ++i) v *= q;
  }
  return v;
}

std::vector<u64> Factorization::divisors() const {
  std::vector<u64> divs{1};
  for (const auto& [q, e] : terms_) {
    const std::size_t base_count = divs.size();
    u64 power = 1;
    for (unsigned i = 0; i < e; ++i) {
      power *= q;
      for (std::size_t j = 0; j < base_count; ++j) divs.push_back(divs[j] * power);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

Factorization factorize(u64 n) {
  if (n == 0) throw ArgumentError("factorize: n must be >= 1");
  std::vector<u64> primes;
  factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<Factorization::Term> terms;
  for (u64 q : primes) {
    if (!terms.empty() && terms.back().first == q) {
      ++terms.back().second;
    } else {
      terms.emplace_back(q, 1u);
    }
  }
  return Factorization(std::move(terms));
}

ArithmeticFunctions arithmetic_functions(const Factorization& f) {
  ArithmeticFunctions out{1, 1, 1};
  for (const auto& [q, e] : f.terms()) {
    u64 qe1 = 1;
    for (unsigned i = 1; i < e; ++i) qe1 *= q;
    out.phi *= qe1 * (q - 1);
    out.mu = (e > 1) ? 0 : -out.mu;
    out.tau *= e + 1;
  }
  return out;
}

ArithmeticFunctions arithmetic_functions(u64 n) {
  return arithmetic_functions(factorize(n));
}

u64 multiplicative_order(u64 a, u64 modulus) {
  if (modulus == 0) throw ArgumentError("multiplicative_order: modulus must be >= 1");
  a %= modulus;
  if (std::gcd(a, modulus) != 1) {
    throw ArgumentError("multiplicative_order: gcd(a, modulus) != 1");
  }
  if (modulus == 1) return 1;
  const u64 group_order = arithmetic_functions(modulus).phi;
  u64 order = group_order;
  const Factorization f = factorize(group_order);
  for (const auto& [q, e] : f.terms()) {
    for (unsigned i = 0; i < e; ++i) {
      if (mod_pow(a, order / q, modulus) != 1) break;
      order /= q;
    }
  }
  return order;
}

OddPrime::OddPrime(u64 p) : p_(p), p_squared_(p * p) {
  if (p < 3 || p >= kMax || !is_prime(p)) {
    throw ArgumentError("OddPrime: " + std::to_string(p) + " is not an odd prime below 2^31");
  }
  pm1_factors_ = factorize(p - 1);
}

bool is_primitive_root(u64 a, const OddPrime& p) {
  const u64 pv = p.value();
  a %= pv;
  if (a == 0) return false;
  for (const auto& [q, e] : p.group_order_factors().terms()) {
    (void)e;
    if (mod_pow(a, (pv - 1) / q, pv) == 1) return false;
  }
  return true;
}

u64 least_primitive_root(const OddPrime& p) {
  for (u64 g = 1; g < p.value(); ++g) {
    if (is_primitive_root(g, p)) return g;
  }
  throw InternalError("least_primitive_root: none found");
}

}  // namespace fermatq
