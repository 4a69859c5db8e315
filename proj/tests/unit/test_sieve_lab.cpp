#include <gtest/gtest.h>

#include <random>

#include "fermatq/errors.hpp"
#include "fermatq/sieve_lab.hpp"
#include "oracles.hpp"

using namespace fermatq;

namespace {

TrigPolynomial random_poly(std::mt19937_64& rng, u64 K) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> c(K);
  for (auto& z : c) z = Complex(u(rng), u(rng));
  return TrigPolynomial(std::move(c));
}

// Direct evaluation with floating angles, independent of the library's phase reduction.
double lhs_oracle(const TrigPolynomial& poly, u64 R) {
  double total = 0.0;
  for (u64 r = 1; r <= R; ++r) {
    const u64 m = r * r;
    for (u64 a = 1; a <= m; ++a) {
      if (oracle::gcd(a, r) != 1) continue;
      Complex t = 0.0;
      for (u64 k = 1; k <= poly.degree(); ++k) t += poly.alpha(k) * oracle::e(k * a, m);
      total += std::norm(t);
    }
  }
  return total;
}

u64 factorizations_brute(u64 M, unsigned nu, u64 k) {
  if (nu == 0) return k == 1;
  u64 c = 0;
  for (u64 m = 1; m <= M; ++m) {
    if (k % m == 0) c += factorizations_brute(M, nu - 1, k / m);
  }
  return c;
}

Complex rho_brute(u64 M, u64 b, unsigned nu, u64 k, u64 sum = 0) {
  if (nu == 0) return k == 1 ? oracle::e(b * sum, M) : Complex(0.0);
  Complex s = 0.0;
  for (u64 m = 1; m <= M; ++m) {
    if (k % m == 0) s += rho_brute(M, b, nu - 1, k / m, sum + m);
  }
  return s;
}

}  // namespace

TEST(TrigPolynomial, EvaluationExamples) {
  const TrigPolynomial one({Complex(1.0, 0.0)});
  EXPECT_EQ(trig_poly_eval(one, 0, 1), Complex(1.0, 0.0));
  EXPECT_NEAR(std::abs(trig_poly_eval(one, 1, 4) - Complex(0.0, 1.0)), 0.0, 1e-15);
  const TrigPolynomial three(std::vector<Complex>(3, Complex(1.0, 0.0)));
  EXPECT_NEAR(std::abs(trig_poly_eval(three, 1, 3)), 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(three.energy(), 3.0);
  EXPECT_EQ(three.degree(), 3u);
  EXPECT_THROW(TrigPolynomial({}), ArgumentError);
  EXPECT_THROW(trig_poly_eval(one, 1, 0), ArgumentError);
}

TEST(LargeSieve, LhsExamples) {
  const TrigPolynomial one({Complex(1.0, 0.0)});
  EXPECT_NEAR(large_sieve_lhs(one, 1), 1.0, 1e-12);
  EXPECT_NEAR(large_sieve_lhs(one, 2), 3.0, 1e-12);
  std::mt19937_64 rng(37);
  for (int i = 0; i < 10; ++i) {
    const TrigPolynomial poly = random_poly(rng, 1 + rng() % 40);
    Complex s = 0.0;
    for (const Complex& c : poly.coefficients()) s += c;
    EXPECT_NEAR(large_sieve_lhs(poly, 1), std::norm(s), 1e-9);
  }
  EXPECT_THROW(large_sieve_lhs(one, 0), ArgumentError);
}

TEST(LargeSieve, LhsMatchesDirectOracle) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) {
    const TrigPolynomial poly = random_poly(rng, 1 + rng() % 30);
    const u64 R = 1 + rng() % 7;
    const double expected = lhs_oracle(poly, R);
    EXPECT_NEAR(large_sieve_lhs(poly, R), expected, 1e-9 * std::max(1.0, expected));
  }
}

TEST(LargeSieve, LhsMonotoneInR) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 10; ++i) {
    const TrigPolynomial poly = random_poly(rng, 1 + rng() % 64);
    double prev = 0.0;
    for (u64 R = 1; R <= 10; ++R) {
      const double cur = large_sieve_lhs(poly, R);
      ASSERT_GE(cur, prev);
      prev = cur;
    }
  }
}

TEST(LargeSieve, BudgetRefusal) {
  const TrigPolynomial poly(std::vector<Complex>(100, Complex(1.0, 0.0)));
  EXPECT_THROW(large_sieve_lhs(poly, 50, 1000), BudgetExceeded);
  EXPECT_NO_THROW(large_sieve_lhs(poly, 2, 1000));
}

TEST(LargeSieve, EnvelopeExamples) {
  EXPECT_DOUBLE_EQ(large_sieve_rhs(1, 1, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(large_sieve_rhs(100, 1, 1.0), 111.0);
  EXPECT_DOUBLE_EQ(large_sieve_rhs(37, 5, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(zhao_conjecture_rhs(1, 1, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(zhao_conjecture_rhs(8, 2, 1.0), 16.0);
  EXPECT_DOUBLE_EQ(zhao_conjecture_rhs(37, 5, 0.0), 0.0);
}

TEST(LargeSieve, ReportFields) {
  const TrigPolynomial poly(std::vector<Complex>(10, Complex(1.0, 0.0)));
  const SieveReport r = sieve_report(poly, 5);
  EXPECT_EQ(r.R, 5u);
  EXPECT_EQ(r.K, 10u);
  EXPECT_DOUBLE_EQ(r.A, 10.0);
  EXPECT_NEAR(r.lhs, large_sieve_lhs(poly, 5), 1e-12);
  EXPECT_DOUBLE_EQ(r.rhs_bz, large_sieve_rhs(10, 5, 10.0));
  EXPECT_DOUBLE_EQ(r.ratio_bz, r.lhs / r.rhs_bz);
  EXPECT_DOUBLE_EQ(r.ratio_zhao, r.lhs / r.rhs_zhao);
  EXPECT_GE(r.lhs, 0.0);
}

TEST(LargeSieve, RatioScalingSanity) {
  // The implied constant is unknown, so only the growth of lhs / rhs_bz
  // from half scale to full scale is constrained.
  std::mt19937_64 rng(47);
  auto max_ratio = [&](u64 R, u64 K) {
    double best = 0.0;
    for (int i = 0; i < 25; ++i) best = std::max(best, sieve_report(random_poly(rng, K), R).ratio_bz);
    return best;
  };
  for (auto [R, K] : {std::pair<u64, u64>{4, 16}, {8, 64}, {8, 32}, {6, 48}}) {
    const double half = max_ratio(R / 2, K / 2);
    const double full = max_ratio(R, K);
    EXPECT_LE(full, 4.0 * half) << "R=" << R << " K=" << K;
  }
}

TEST(Parseval, Examples) {
  EXPECT_LT(parseval_check(TrigPolynomial({Complex(1.0, 0.0)}), 4), 1e-6 * 4);
  EXPECT_LT(parseval_check(TrigPolynomial({Complex(1.0, 0.0), Complex(1.0, 0.0)}), 2), 1e-6);
  EXPECT_THROW(parseval_check(TrigPolynomial({Complex(1.0, 0.0)}), 0), ArgumentError);
}

TEST(Parseval, RandomPolynomials) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 300; ++i) {
    const u64 K = 1 + rng() % 256;
    const u64 M = (i % 3 == 0) ? K : 1 + rng() % 512;
    const TrigPolynomial poly = random_poly(rng, K);
    ASSERT_LT(parseval_check(poly, M), 1e-6 * M * poly.energy()) << K << " " << M;
  }
}

TEST(Rho, Examples) {
  for (u64 k = 1; k <= 7; ++k) {
    const Complex v = rho_coefficient(7, 3, 1, k);
    EXPECT_NEAR(std::abs(v - oracle::e(3 * k, 7)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(v), 1.0, 1e-12);
  }
  EXPECT_NEAR(std::abs(rho_coefficient(4, 1, 2, 4) - Complex(1.0, 2.0)), 0.0, 1e-12);
  EXPECT_EQ(rho_coefficient(4, 0, 2, 4), Complex(3.0, 0.0));
  EXPECT_EQ(rho_coefficient(4, 1, 2, 5), Complex(0.0, 0.0));
  EXPECT_EQ(ordered_factorization_count(4, 2, 4), 3u);
  EXPECT_THROW(rho_coefficient(0, 1, 2, 4), ArgumentError);
  EXPECT_THROW(rho_coefficient(4, 1, 0, 4), ArgumentError);
}

TEST(Rho, CountsAndMagnitudeBound) {
  for (auto [M, nu] : {std::pair<u64, unsigned>{100, 2}, {21, 3}, {10, 4}}) {
    const u64 K = std::min<u64>(10000, [&] {
      u64 v = 1;
      for (unsigned i = 0; i < nu; ++i) v *= M;
      return v;
    }());
    for (u64 k = 1; k <= K; k += (k < 500 ? 1 : 7)) {
      const u64 count = ordered_factorization_count(M, nu, k);
      ASSERT_EQ(count, factorizations_brute(M, nu, k)) << M << " " << nu << " " << k;
      ASSERT_LE(std::abs(rho_coefficient(M, 1, nu, k)), static_cast<double>(count) + 1e-9);
      ASSERT_NEAR(rho_coefficient(M, 0, nu, k).real(), static_cast<double>(count), 1e-9);
    }
  }
}

TEST(Rho, MatchesBruteForceTuples) {
  for (u64 k = 1; k <= 216; ++k) {
    ASSERT_LT(std::abs(rho_coefficient(6, 5, 3, k) - rho_brute(6, 5, 3, k)), 1e-9) << k;
  }
}

TEST(Rho, PolynomialMatchesCoefficients) {
  const TrigPolynomial poly = rho_polynomial(5, 2, 3);
  ASSERT_EQ(poly.degree(), 125u);
  for (u64 k = 1; k <= 125; ++k) EXPECT_LT(std::abs(poly.alpha(k) - rho_coefficient(5, 2, 3, k)), 1e-9) << k;
  EXPECT_THROW(rho_polynomial(100, 1, 4, 1000), BudgetExceeded);
}

TEST(NSelector, Parsing) {
  EXPECT_EQ(NSelector::parse("17")(256, 257), 17u);
  EXPECT_EQ(NSelector::parse("P^0.5")(256, 257), 16u);
  EXPECT_EQ(NSelector::parse("P^0.5")(512, 521), 23u);
  EXPECT_EQ(NSelector::parse("P^0.5")(1024, 1031), 32u);
  EXPECT_EQ(NSelector::parse("P^1/2")(1024, 1031), 32u);
  EXPECT_EQ(NSelector::parse("P^5/6")(64, 67), 32u);
  EXPECT_EQ(NSelector::parse("P^1")(100, 101), 100u);
  EXPECT_EQ(NSelector::parse("P^2")(30, 31), 900u);
  for (const char* bad : {"", "P^", "P^x", "P^1/0", "-3", "0", "Q^2", "P^0.", "12a"}) {
    EXPECT_THROW(NSelector::parse(bad), ArgumentError) << bad;
  }
  const NSelector t = NSelector::table({{11, 3}, {13, 4}});
  EXPECT_EQ(t(8, 13), 4u);
  EXPECT_THROW(t(8, 17), ArgumentError);
}

TEST(NSelector, ExactCeilingPowers) {
  EXPECT_EQ(ceil_rational_power(256, 1, 2), 16u);
  EXPECT_EQ(ceil_rational_power(257, 1, 2), 17u);
  EXPECT_EQ(ceil_rational_power(1000, 1, 3), 10u);
  EXPECT_EQ(ceil_rational_power(1001, 1, 3), 11u);
  EXPECT_EQ(ceil_rational_power(1, 7, 3), 1u);
  EXPECT_EQ(ceil_rational_power(7, 0, 1), 1u);
  for (u64 P = 1; P < 3000; ++P) {
    const u64 n = ceil_rational_power(P, 2, 3);
    // n^3 >= P^2 > (n-1)^3
    ASSERT_GE(n * n * n, P * P);
    ASSERT_LT((n - 1) * (n - 1) * (n - 1), P * P);
  }
}

TEST(Theorem1Average, SmallExampleMatchesNaive) {
  EXPECT_EQ(dyadic_primes(8), (std::vector<u64>{11, 13}));
  const Theorem1Report r = theorem1_average(8, 1, NSelector::constant(3));
  double expected = 0.0;
  for (u64 p : {11ull, 13ull}) expected += std::pow(oracle::max_exp_sum(p, 3).second, 2);
  EXPECT_NEAR(r.lhs, expected, 1e-9);
  EXPECT_EQ(r.prime_count, 2u);
  EXPECT_DOUBLE_EQ(r.N, 1.5);
  EXPECT_EQ(r.M, 3u);
  EXPECT_DOUBLE_EQ(r.trivial_bound, 18.0);
  EXPECT_DOUBLE_EQ(r.rhs_envelope, theorem1_envelope(8, 1.5, 1));
  EXPECT_DOUBLE_EQ(r.ratio, r.lhs / r.rhs_envelope);
  EXPECT_EQ(r.wall_seconds, 0.0);
  ASSERT_EQ(r.per_prime.size(), 2u);
  EXPECT_EQ(r.per_prime[0].p, 11u);
  EXPECT_EQ(r.per_prime[0].a_star, oracle::max_exp_sum(11, 3).first);
}

TEST(Theorem1Average, UnitLengthsCountPrimes) {
  for (u64 P : {3ull, 10ull, 100ull, 1000ull}) {
    const Theorem1Report r = theorem1_average(P, 3, NSelector::constant(1));
    EXPECT_DOUBLE_EQ(r.lhs, static_cast<double>(dyadic_primes(P).size()));
    EXPECT_EQ(r.prime_count, primes_up_to(2 * P).size() - primes_up_to(P).size());
  }
}

TEST(Theorem1Average, BoundedByTrivialAndThreadInvariant) {
  for (u64 P : {50ull, 128ull}) {
    for (unsigned nu : {1u, 2u, 3u}) {
      AverageOptions one;
      one.kappas = {0.1, 0.25};
      AverageOptions many = one;
      many.threads = 8;
      const Theorem1Report a = theorem1_average(P, nu, NSelector::power(2, 3), one);
      const Theorem1Report b = theorem1_average(P, nu, NSelector::power(2, 3), many);
      EXPECT_LE(a.lhs, a.trivial_bound);
      EXPECT_EQ(a.lhs, b.lhs);
      EXPECT_EQ(a.exceptional, b.exceptional);
      ASSERT_EQ(a.per_prime.size(), b.per_prime.size());
      for (std::size_t i = 0; i < a.per_prime.size(); ++i) EXPECT_EQ(a.per_prime[i].max_abs, b.per_prime[i].max_abs);
    }
  }
}

TEST(Theorem1Average, ExceptionalCounts) {
  AverageOptions o;
  o.kappas = {0.0, 100.0};
  const Theorem1Report r = theorem1_average(64, 2, NSelector::constant(20), o);
  ASSERT_EQ(r.exceptional.size(), 2u);
  u64 expected = 0;
  for (const auto& row : r.per_prime) expected += row.max_abs > static_cast<double>(row.N_p);
  EXPECT_EQ(r.exceptional[0].second, expected);
  EXPECT_EQ(r.exceptional[1].second, r.prime_count);
}

TEST(Theorem1Average, Refusals) {
  EXPECT_THROW(theorem1_average(2, 1, NSelector::constant(1)), ArgumentError);
  EXPECT_THROW(theorem1_average(10, 0, NSelector::constant(1)), ArgumentError);
  EXPECT_THROW(theorem1_average(5, 1, NSelector::constant(60)), ArgumentError);  // N > P^2
  EXPECT_THROW(theorem1_average(8, 1, NSelector::table({{11, 2}, {13, 8}})), ArgumentError);
  AverageOptions tight;
  tight.budget_ops = 100;
  EXPECT_THROW(theorem1_average(100, 1, NSelector::constant(5), tight), BudgetExceeded);
  EXPECT_NO_THROW(theorem1_average(8, 1, NSelector::table({{11, 2}, {13, 3}})));
}

TEST(Theorem1Average, ErrorsPropagateFromWorkers) {
  // Passes the up-front checks, then every worker hits the table cap.
  AverageOptions o;
  o.threads = 4;
  o.budget_ops = ~u64{0};
  EXPECT_THROW(theorem1_average(32768, 1, NSelector::constant(kDefaultTableCap + 1), o), BudgetExceeded);
}
