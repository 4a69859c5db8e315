#pragma once

/**
 * @file sieve_lab.hpp
 * @brief Trigonometric polynomials and the large sieve sum over square
 * moduli, the coefficients rho_{b,nu}(k), and the average over primes
 * p in (P, 2P] of max_a |S_p(a; N_p)|^(2 nu).
 *
 * Envelope formulas are evaluated without implied constants or eps/o(1)
 * factors. They are comparison columns; nothing here asserts them.
 */

#include <map>
#include <string>
#include <vector>

#include "fermatq/arith.hpp"
#include "fermatq/char_sums.hpp"

namespace fermatq {

/// T(u) = sum_{k=1}^{K} alpha_k e(k u). coefficients()[k - 1] holds alpha_k.
class TrigPolynomial {
 public:
  /// Throws ArgumentError when empty.
  explicit TrigPolynomial(std::vector<Complex> coefficients);

  u64 degree() const { return coeffs_.size(); }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  const Complex& alpha(u64 k) const { return coeffs_[k - 1]; }
  /// A = sum |alpha_k|^2.
  double energy() const;

 private:
  std::vector<Complex> coeffs_;
};

/// T(num / den), with each phase k * num reduced mod den exactly.
Complex trig_poly_eval(const TrigPolynomial& poly, u64 num, u64 den);

/// Default cap on evaluation counts (terms summed) for the sieve experiments.
inline constexpr u64 kDefaultBudgetOps = 20'000'000'000ull;

/// sum_{r <= R} sum_{a <= r^2, gcd(a, r) = 1} |T(a / r^2)|^2.
/// Throws BudgetExceeded when about sum r^2 * K terms exceed budget_ops.
double large_sieve_lhs(const TrigPolynomial& poly, u64 R, u64 budget_ops = kDefaultBudgetOps);

/// (R^3 + K + min(K R^(1/2), K^(1/2) R^2)) A.
double large_sieve_rhs(u64 K, u64 R, double A);

/// (R^3 + K) A.
double zhao_conjecture_rhs(u64 K, u64 R, double A);

struct SieveReport {
  u64 R;
  u64 K;
  double A;
  double lhs;
  double rhs_bz;
  double rhs_zhao;
  double ratio_bz;
  double ratio_zhao;
};

SieveReport sieve_report(const TrigPolynomial& poly, u64 R, u64 budget_ops = kDefaultBudgetOps);

/// |sum_{a=0}^{M-1} |T(a/M)|^2 - M sum_j |c_j|^2| with c_j = sum_{k = j mod M} alpha_k.
double parseval_check(const TrigPolynomial& poly, u64 M);

/// rho_{b,nu}(k) = sum over ordered (m_1..m_nu), 1 <= m_i <= M, m_1...m_nu = k,
/// of e_M(b (m_1 + ... + m_nu)).
Complex rho_coefficient(u64 M, u64 b, unsigned nu, u64 k);

/// Number of ordered nu-tuples in [1, M]^nu with product k.
u64 ordered_factorization_count(u64 M, unsigned nu, u64 k);

/// The polynomial with alpha_k = rho_{b,nu}(k) for k = 1..M^nu, built by
/// repeated multiplicative convolution. Throws BudgetExceeded if M^nu > cap.
TrigPolynomial rho_polynomial(u64 M, u64 b, unsigned nu, u64 cap = u64{1} << 26);

/// Chooses N_p for each prime p in (P, 2P].
class NSelector {
 public:
  static NSelector constant(u64 n);
  /// N_p = ceil(P^(num/den)) for every p.
  static NSelector power(u64 num, u64 den);
  /// N_p read from an explicit map; every swept prime must be present.
  static NSelector table(std::map<u64, u64> per_prime);
  /// Parses "17", "P^0.5", "P^5/6".
  static NSelector parse(const std::string& rule);

  u64 operator()(u64 P, u64 p) const;
  std::string describe() const;

 private:
  enum class Kind { kConstant, kPower, kTable };
  Kind kind_ = Kind::kConstant;
  u64 value_ = 1;
  u64 num_ = 0;
  u64 den_ = 1;
  std::map<u64, u64> table_;
};

/// ceil(P^(num/den)), exact.
u64 ceil_rational_power(u64 P, u64 num, u64 den);

struct PrimeMaxSum {
  u64 p;
  u64 N_p;
  u64 a_star;
  double max_abs;
};

struct Theorem1Report {
  u64 P;
  unsigned nu;
  /// Dyadic scale: max N_p / 2, so every N_p lies in (N, 2N].
  double N;
  u64 M;  // 2N rounded up, as in the Fourier step
  double lhs;
  double rhs_envelope;
  double trivial_bound;
  double ratio;
  u64 prime_count;
  double wall_seconds;
  std::vector<PrimeMaxSum> per_prime;
  /// (kappa, #{p : max_abs > N_p p^(-kappa)}).
  std::vector<std::pair<double, u64>> exceptional;
};

/// (P^3 + N^nu + min(N^nu P^(1/2), N^(nu/2) P^2)) N^nu.
double theorem1_envelope(double P, double N, unsigned nu);

struct AverageOptions {
  unsigned threads = 1;
  u64 budget_ops = kDefaultBudgetOps;
  std::vector<double> kappas;
  bool timing = false;
};

/// Primes are processed in parallel and reduced in ascending order with
/// pairwise summation, so the report does not depend on the thread count.
Theorem1Report theorem1_average(u64 P, unsigned nu, const NSelector& selector,
                                const AverageOptions& options = {});

/// Primes p in (P, 2P].
std::vector<u64> dyadic_primes(u64 P);

}  // namespace fermatq
