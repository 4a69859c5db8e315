#include "fermatq/sieve_lab.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fermatq/errors.hpp"
#include "fermatq/parallel.hpp"
#include "fermatq/quotient.hpp"

namespace fermatq {

namespace {

// Saturating u128 power; returns false on overflow.
bool checked_pow(u64 base, u64 exp, u128& out) {
  u128 r = 1;
  for (u64 i = 0; i < exp; ++i) {
    if (base != 0 && r > (~u128{0}) / base) return false;
    r *= base;
  }
  out = r;
  return true;
}

// Sign of n^den - P^num.
int compare_powers(u64 n, u64 den, u64 P, u64 num) {
  u128 lhs = 0, rhs = 0;
  if (checked_pow(n, den, lhs) && checked_pow(P, num, rhs)) {
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }
  const long double l = den * std::log(static_cast<long double>(n));
  const long double r = num * std::log(static_cast<long double>(P));
  return l < r ? -1 : (l > r ? 1 : 0);
}

void for_each_factorization(const std::vector<u64>& divisors, u64 M, unsigned slots, u64 rem,
                            u64 partial_sum, const auto& emit) {
  if (slots == 1) {
    if (rem <= M) emit(partial_sum + rem);
    return;
  }
  for (u64 d : divisors) {
    if (d > M || d > rem) break;
    if (rem % d != 0) continue;
    for_each_factorization(divisors, M, slots - 1, rem / d, partial_sum + d, emit);
  }
}

u64 checked_power_u64(u64 base, unsigned exp, u64 cap) {
  u64 r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

}  // namespace

TrigPolynomial::TrigPolynomial(std::vector<Complex> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw ArgumentError("TrigPolynomial: need at least one coefficient");
}

double TrigPolynomial::energy() const {
  double a = 0.0;
  for (const Complex& c : coeffs_) a += std::norm(c);
  return a;
}

Complex trig_poly_eval(const TrigPolynomial& poly, u64 num, u64 den) {
  if (den == 0) throw ArgumentError("trig_poly_eval: zero denominator");
  num %= den;
  Complex s{0.0, 0.0};
  for (u64 k = 1; k <= poly.degree(); ++k) s += poly.alpha(k) * unit_root(mul_mod(k % den, num, den), den);
  return s;
}

double large_sieve_lhs(const TrigPolynomial& poly, u64 R, u64 budget_ops) {
  if (R == 0) throw ArgumentError("large_sieve_lhs: R must be >= 1");
  const long double cost = static_cast<long double>(poly.degree()) * R * (R + 1) * (2 * R + 1) / 6;
  if (cost > static_cast<long double>(budget_ops)) {
    throw BudgetExceeded("large_sieve_lhs: about " + std::to_string(static_cast<double>(cost)) +
                         " terms exceed budget " + std::to_string(budget_ops));
  }
  const u64 K = poly.degree();
  double total = 0.0;
  for (u64 r = 1; r <= R; ++r) {
    const u64 m = r * r;
    const RootTable roots(m);
    std::vector<u64> k_mod(K);
    for (u64 k = 1; k <= K; ++k) k_mod[k - 1] = k % m;
    for (u64 a = 1; a <= m; ++a) {
      if (std::gcd(a, r) != 1) continue;
      Complex t{0.0, 0.0};
      for (u64 k = 1; k <= K; ++k) t += poly.alpha(k) * roots[mul_mod(k_mod[k - 1], a, m)];
      total += std::norm(t);
    }
  }
  return total;
}

double large_sieve_rhs(u64 K, u64 R, double A) {
  const double k = static_cast<double>(K);
  const double r = static_cast<double>(R);
  return (r * r * r + k + std::min(k * std::sqrt(r), std::sqrt(k) * r * r)) * A;
}

double zhao_conjecture_rhs(u64 K, u64 R, double A) {
  const double r = static_cast<double>(R);
  return (r * r * r + static_cast<double>(K)) * A;
}

SieveReport sieve_report(const TrigPolynomial& poly, u64 R, u64 budget_ops) {
  SieveReport rep{};
  rep.R = R;
  rep.K = poly.degree();
  rep.A = poly.energy();
  rep.lhs = large_sieve_lhs(poly, R, budget_ops);
  rep.rhs_bz = large_sieve_rhs(rep.K, R, rep.A);
  rep.rhs_zhao = zhao_conjecture_rhs(rep.K, R, rep.A);
  rep.ratio_bz = rep.rhs_bz > 0 ? rep.lhs / rep.rhs_bz : 0.0;
  rep.ratio_zhao = rep.rhs_zhao > 0 ? rep.lhs / rep.rhs_zhao : 0.0;
  return rep;
}

double parseval_check(const TrigPolynomial& poly, u64 M) {
  if (M == 0) throw ArgumentError("parseval_check: M must be >= 1");
  const RootTable roots(M);
  double spectral = 0.0;
  for (u64 a = 0; a < M; ++a) {
    Complex t{0.0, 0.0};
    for (u64 k = 1; k <= poly.degree(); ++k) t += poly.alpha(k) * roots[mul_mod(k % M, a, M)];
    spectral += std::norm(t);
  }
  std::vector<Complex> folded(M, Complex{0.0, 0.0});
  for (u64 k = 1; k <= poly.degree(); ++k) folded[k % M] += poly.alpha(k);
  double energy = 0.0;
  for (const Complex& c : folded) energy += std::norm(c);
  return std::abs(spectral - static_cast<double>(M) * energy);
}

Complex rho_coefficient(u64 M, u64 b, unsigned nu, u64 k) {
  if (M == 0 || nu == 0 || k == 0) throw ArgumentError("rho_coefficient: M, nu, k must be >= 1");
  const std::vector<u64> divisors = factorize(k).divisors();
  b %= M;
  Complex s{0.0, 0.0};
  for_each_factorization(divisors, M, nu, k, 0,
                         [&](u64 total) { s += unit_root(mul_mod(b, total % M, M), M); });
  return s;
}

u64 ordered_factorization_count(u64 M, unsigned nu, u64 k) {
  if (M == 0 || nu == 0 || k == 0) {
    throw ArgumentError("ordered_factorization_count: M, nu, k must be >= 1");
  }
  const std::vector<u64> divisors = factorize(k).divisors();
  u64 count = 0;
  for_each_factorization(divisors, M, nu, k, 0, [&](u64) { ++count; });
  return count;
}

TrigPolynomial rho_polynomial(u64 M, u64 b, unsigned nu, u64 cap) {
  if (M == 0 || nu == 0) throw ArgumentError("rho_polynomial: M and nu must be >= 1");
  const u64 K = checked_power_u64(M, nu, cap);
  if (K > cap) throw BudgetExceeded("rho_polynomial: M^nu exceeds coefficient cap");
  b %= M;
  std::vector<Complex> base(M);
  for (u64 m = 1; m <= M; ++m) base[m - 1] = unit_root(mul_mod(b, m % M, M), M);
  std::vector<Complex> current = base;
  for (unsigned level = 1; level < nu; ++level) {
    std::vector<Complex> next(current.size() * M, Complex{0.0, 0.0});
    for (u64 m = 1; m <= M; ++m) {
      for (u64 t = 1; t <= current.size(); ++t) {
        if (current[t - 1] == Complex{0.0, 0.0}) continue;
        next[m * t - 1] += base[m - 1] * current[t - 1];
      }
    }
    current = std::move(next);
  }
  return TrigPolynomial(std::move(current));
}

u64 ceil_rational_power(u64 P, u64 num, u64 den) {
  if (den == 0) throw ArgumentError("ceil_rational_power: zero denominator");
  if (P == 0) throw ArgumentError("ceil_rational_power: P must be >= 1");
  const long double guess = std::ceil(std::pow(static_cast<long double>(P),
                                               static_cast<long double>(num) / den));
  u64 n = std::max<u64>(1, static_cast<u64>(guess));
  while (n > 1 && compare_powers(n - 1, den, P, num) >= 0) --n;
  while (compare_powers(n, den, P, num) < 0) ++n;
  return n;
}

NSelector NSelector::constant(u64 n) {
  if (n == 0) throw ArgumentError("NSelector: N_p must be >= 1");
  NSelector s;
  s.kind_ = Kind::kConstant;
  s.value_ = n;
  return s;
}

NSelector NSelector::power(u64 num, u64 den) {
  if (den == 0) throw ArgumentError("NSelector: zero denominator in exponent");
  const u64 g = std::gcd(num, den);
  NSelector s;
  s.kind_ = Kind::kPower;
  s.num_ = num / g;
  s.den_ = den / g;
  return s;
}

NSelector NSelector::table(std::map<u64, u64> per_prime) {
  NSelector s;
  s.kind_ = Kind::kTable;
  s.table_ = std::move(per_prime);
  return s;
}

NSelector NSelector::parse(const std::string& rule) {
  auto parse_u64 = [&](const std::string& t) -> u64 {
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
      throw ArgumentError("N-rule: cannot parse '" + rule + "'");
    }
    return std::stoull(t);
  };
  if (rule.size() > 2 && (rule[0] == 'P' || rule[0] == 'p') && rule[1] == '^') {
    const std::string expo = rule.substr(2);
    if (const auto slash = expo.find('/'); slash != std::string::npos) {
      return power(parse_u64(expo.substr(0, slash)), parse_u64(expo.substr(slash + 1)));
    }
    if (const auto dot = expo.find('.'); dot != std::string::npos) {
      const std::string whole = expo.substr(0, dot);
      const std::string frac = expo.substr(dot + 1);
      if (frac.empty() || frac.size() > 12) throw ArgumentError("N-rule: bad exponent in '" + rule + "'");
      u64 den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      const u64 num = (whole.empty() ? 0 : parse_u64(whole)) * den + parse_u64(frac);
      return power(num, den);
    }
    return power(parse_u64(expo), 1);
  }
  return constant(parse_u64(rule));
}

u64 NSelector::operator()(u64 P, u64 p) const {
  switch (kind_) {
    case Kind::kConstant:
      return value_;
    case Kind::kPower:
      return ceil_rational_power(P, num_, den_);
    case Kind::kTable: {
      const auto it = table_.find(p);
      if (it == table_.end()) throw ArgumentError("N-rule table has no entry for p = " + std::to_string(p));
      return it->second;
    }
  }
  return value_;
}

std::string NSelector::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kConstant: os << value_; break;
    case Kind::kPower: os << "P^" << num_ << "/" << den_; break;
    case Kind::kTable: os << "table[" << table_.size() << "]"; break;
  }
  return os.str();
}

double theorem1_envelope(double P, double N, unsigned nu) {
  const double n_nu = std::pow(N, nu);
  const double inner = std::min(n_nu * std::sqrt(P), std::pow(N, nu / 2.0) * P * P);
  return (P * P * P + n_nu + inner) * n_nu;
}

std::vector<u64> dyadic_primes(u64 P) {
  std::vector<u64> out;
  for (u64 p : primes_up_to(2 * P)) {
    if (p > P && p > 2) out.push_back(p);
  }
  return out;
}

Theorem1Report theorem1_average(u64 P, unsigned nu, const NSelector& selector,
                                const AverageOptions& options) {
  if (P < 3) throw ArgumentError("theorem1_average: P must be >= 3");
  if (nu == 0) throw ArgumentError("theorem1_average: nu must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  const std::vector<u64> primes = dyadic_primes(P);
  std::vector<u64> lengths;
  lengths.reserve(primes.size());
  for (u64 p : primes) {
    const u64 n = selector(P, p);
    if (n == 0) throw ArgumentError("theorem1_average: N_p must be >= 1");
    lengths.push_back(n);
  }
  const u64 max_len = *std::max_element(lengths.begin(), lengths.end());
  const u64 min_len = *std::min_element(lengths.begin(), lengths.end());
  if (2 * min_len <= max_len) {
    throw ArgumentError("theorem1_average: N_p values do not fit one dyadic range (N, 2N]");
  }
  const double N = static_cast<double>(max_len) / 2.0;
  if (N > static_cast<double>(P) * static_cast<double>(P)) {
    throw ArgumentError("theorem1_average: N must not exceed P^2");
  }
  long double cost = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    cost += static_cast<long double>(lengths[i]) + static_cast<long double>(primes[i]) * primes[i];
  }
  if (cost > static_cast<long double>(options.budget_ops)) {
    throw BudgetExceeded("theorem1_average: estimated cost " + std::to_string(static_cast<double>(cost)) +
                         " exceeds budget " + std::to_string(options.budget_ops));
  }

  Theorem1Report rep{};
  rep.P = P;
  rep.nu = nu;
  rep.N = N;
  rep.M = max_len;
  rep.prime_count = primes.size();
  rep.per_prime = parallel_map(primes.size(), options.threads, [&](std::size_t i) {
    const OddPrime p(primes[i]);
    const MaxExpSum m = max_exp_sum(value_histogram(QuotientTable(p, lengths[i])));
    return PrimeMaxSum{primes[i], lengths[i], m.a_star, m.value};
  });

  std::vector<double> terms, trivial;
  terms.reserve(primes.size());
  trivial.reserve(primes.size());
  for (const PrimeMaxSum& row : rep.per_prime) {
    terms.push_back(std::pow(row.max_abs, 2.0 * nu));
    trivial.push_back(std::pow(static_cast<double>(row.N_p), 2.0 * nu));
  }
  rep.lhs = pairwise_sum(terms);
  rep.trivial_bound = pairwise_sum(trivial);
  rep.rhs_envelope = theorem1_envelope(static_cast<double>(P), N, nu);
  rep.ratio = rep.lhs / rep.rhs_envelope;
  for (double kappa : options.kappas) {
    u64 count = 0;
    for (const PrimeMaxSum& row : rep.per_prime) {
      if (row.max_abs > static_cast<double>(row.N_p) * std::pow(static_cast<double>(row.p), -kappa)) ++count;
    }
    rep.exceptional.emplace_back(kappa, count);
  }
  if (options.timing) {
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return rep;
}

}  // namespace fermatq
