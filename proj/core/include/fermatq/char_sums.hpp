#pragma once

/**
 * @file char_sums.hpp
 * @brief Exponential sums over Fermat quotients, multiplicative characters
 * modulo p and p^2, and Gauss sums.
 *
 * Roots of unity are always evaluated as exp(2 pi i k / r) from an integer k
 * already reduced mod r, never by accumulating angles, so the error of a
 * single term does not depend on how many terms precede it.
 */

#include <complex>
#include <concepts>
#include <memory>
#include <numeric>
#include <vector>

#include "fermatq/arith.hpp"
#include "fermatq/errors.hpp"
#include "fermatq/quotient.hpp"

namespace fermatq {

using Complex = std::complex<double>;

/// exp(2 pi i k / r) for any integer k (reduced mod r internally).
Complex unit_root(u64 k, u64 r);

/// Table of e_r(k) for k in [0, r). Conjugate-symmetric bit for bit:
/// at(r - k) == conj(at(k)).
class RootTable {
 public:
  explicit RootTable(u64 r);
  u64 modulus() const { return r_; }
  const Complex& operator[](u64 k) const { return roots_[k]; }

 private:
  u64 r_;
  std::vector<Complex> roots_;
};

/// S_p(a; N) by summing e_p(a q_p(n)) over n = 1..N in index order.
Complex exp_sum_direct(const OddPrime& p, u64 a, u64 N);

/// Same value regrouped by quotient value: sum_q counts[q] e_p(a q).
Complex exp_sum_from_histogram(const ResidueHistogram& hist, u64 a);

struct MaxExpSum {
  u64 a_star;
  double value;
  Complex sum;
};

/// max over a in [1, p-1] of |S_p(a; N)|, smallest a on ties.
MaxExpSum max_exp_sum(const ResidueHistogram& hist);
MaxExpSum max_exp_sum(const OddPrime& p, u64 N);

/// A character: modulus() and a value for every integer.
template <typename C>
concept Character = requires(const C& c, u64 n) {
  { c.modulus() } -> std::convertible_to<u64>;
  { c(n) } -> std::convertible_to<Complex>;
};

/// n -> e_p(a q_p(n)) on units mod p^2, 0 elsewhere. Primitive of order p.
class HbCharacter {
 public:
  /// Throws ArgumentError when p | a.
  HbCharacter(const OddPrime& p, u64 a);

  const OddPrime& prime() const { return p_; }
  u64 a() const { return a_; }
  u64 modulus() const { return p_.squared(); }
  u64 order() const { return p_.value(); }

  /// a q_p(n) mod p, the exponent of e_p; undefined when p | n.
  QuotientValue exponent(u64 n) const;
  Complex operator()(u64 n) const;

 private:
  OddPrime p_;
  u64 a_;
  std::shared_ptr<const RootTable> roots_;
};

/// Discrete logarithms to the least primitive root g modulo p.
class DiscreteLogTable {
 public:
  explicit DiscreteLogTable(const OddPrime& p);

  const OddPrime& prime() const { return p_; }
  u64 generator() const { return g_; }
  /// ind_g(x) in [0, p-2] for x not divisible by p.
  u64 index(u64 x) const { return index_[x % p_.value()]; }
  const RootTable& roots() const { return roots_; }

 private:
  OddPrime p_;
  u64 g_;
  std::vector<std::uint32_t> index_;
  RootTable roots_;  // modulus p - 1
};

/// eta(g^j) = e_{p-1}(k j), eta(0) = 0.
class CharacterModP {
 public:
  CharacterModP(std::shared_ptr<const DiscreteLogTable> logs, u64 k);
  CharacterModP(const OddPrime& p, u64 k);

  /// The quadratic character (Legendre symbol).
  static CharacterModP quadratic(std::shared_ptr<const DiscreteLogTable> logs);

  /// Exponents k of the phi(d) characters of exact order d, ascending.
  static std::vector<u64> exponents_of_order(const OddPrime& p, u64 d);

  const OddPrime& prime() const { return logs_->prime(); }
  const std::shared_ptr<const DiscreteLogTable>& logs() const { return logs_; }
  u64 modulus() const { return logs_->prime().value(); }
  u64 exponent() const { return k_; }
  u64 order() const { return (modulus() - 1) / std::gcd(k_, modulus() - 1); }
  bool trivial() const { return k_ == 0; }

  Complex operator()(u64 x) const;

 private:
  std::shared_ptr<const DiscreteLogTable> logs_;
  u64 k_;
};

/// Complex conjugate of a character.
template <Character C>
class Conjugate {
 public:
  explicit Conjugate(const C& chi) : chi_(chi) {}
  u64 modulus() const { return chi_.modulus(); }
  Complex operator()(u64 n) const { return std::conj(chi_(n)); }

 private:
  const C& chi_;
};

/// tau_r(chi) = sum_{v=1}^{r} chi(v) e_r(v), r = chi.modulus().
template <Character C>
Complex gauss_sum(const C& chi) {
  const u64 r = chi.modulus();
  const RootTable roots(r);
  Complex tau{0.0, 0.0};
  for (u64 v = 1; v <= r; ++v) tau += chi(v) * roots[v % r];
  return tau;
}

/// |chi(b) tau_r(conj chi) - sum_{v=1}^{r} conj chi(v) e_r(b v)|.
/// Throws ArgumentError when gcd(b, r) != 1.
template <Character C>
double gauss_identity_residual(const C& chi, u64 b) {
  const u64 r = chi.modulus();
  if (std::gcd(b % r, r) != 1) throw ArgumentError("gauss_identity_residual: gcd(b, r) != 1");
  const Conjugate<C> chibar(chi);
  const RootTable roots(r);
  Complex twisted{0.0, 0.0};
  for (u64 v = 1; v <= r; ++v) twisted += chibar(v) * roots[mul_mod(b % r, v % r, r)];
  return std::abs(chi(b) * gauss_sum(chibar) - twisted);
}

/// sum_{n <= N, p not | n} eta(q_p(n)). Throws ArgumentError for trivial eta.
Complex eta_quotient_sum(const CharacterModP& eta, u64 N);

/// N^(1 - 1/nu) p^((nu + 1) / (2 nu^2)), the exponential-sum baseline
/// without its p^o(1) factor.
double hb_bound_rhs(u64 p, u64 N, unsigned nu);

/// N^(1 - 1/nu) p^((5 nu + 1) / (4 nu^2)), the baseline for character sums
/// eta(q_p(n)), without its p^o(1) factor.
double eta_bound_rhs(u64 p, u64 N, unsigned nu);

}  // namespace fermatq
