#include "fermatq/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "fermatq/arith.hpp"
#include "fermatq/char_sums.hpp"
#include "fermatq/prim_root.hpp"
#include "fermatq/quotient.hpp"
#include "fermatq/schemas.hpp"
#include "fermatq/sieve_lab.hpp"
#include "fermatq/subgroup.hpp"

namespace fermatq {

namespace {

struct CheckFailed {
  std::string what;
};

class Suite {
 public:
  explicit Suite(std::uint64_t& counter) : counter_(counter) {}

  template <typename Describe>
  void check(bool condition, Describe&& describe) {
    ++counter_;
    if (!condition) throw CheckFailed{describe()};
  }

 private:
  std::uint64_t& counter_;
};

template <typename... Args>
std::string cat(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

u64 uniform(std::mt19937_64& rng, u64 lo, u64 hi) {
  return std::uniform_int_distribution<u64>(lo, hi)(rng);
}

std::vector<u64> odd_primes_up_to(u64 limit) {
  std::vector<u64> out;
  for (u64 p : primes_up_to(limit)) {
    if (p > 2) out.push_back(p);
  }
  return out;
}

void suite_core_arith(Suite& s, std::mt19937_64& rng, const SelftestOptions&) {
  for (u64 n = 1; n <= 2000; ++n) {
    const auto divs = factorize(n).divisors();
    u64 phi_sum = 0;
    std::int64_t mu_sum = 0;
    for (u64 d : divs) {
      const auto af = arithmetic_functions(d);
      phi_sum += af.phi;
      mu_sum += af.mu;
    }
    s.check(phi_sum == n, [&] { return cat("arithmetic_functions(n=", n, "): sum phi(d) != n"); });
    s.check(mu_sum == (n == 1 ? 1 : 0), [&] { return cat("arithmetic_functions(n=", n, "): sum mu(d) wrong"); });
    s.check(arithmetic_functions(n).tau == divs.size(), [&] { return cat("arithmetic_functions(n=", n, "): tau"); });
  }
  const auto primes = primes_up_to(5000);
  std::size_t idx = 0;
  for (u64 n = 0; n <= 5000; ++n) {
    const bool listed = idx < primes.size() && primes[idx] == n;
    if (listed) ++idx;
    s.check(listed == is_prime(n), [&] { return cat("primes_up_to/is_prime disagree at n=", n); });
  }
  for (u64 p : odd_primes_up_to(200)) {
    for (int i = 0; i < 10; ++i) {
      const u64 a = uniform(rng, 1, p - 1);
      s.check(mod_pow(a, p - 1, p) == 1, [&] { return cat("mod_pow(", a, ", ", p - 1, ", ", p, ") != 1"); });
    }
  }
  for (u64 pv : odd_primes_up_to(101)) {
    const OddPrime p(pv);
    u64 roots = 0;
    for (u64 a = 1; a < pv; ++a) {
      const bool pr = is_primitive_root(a, p);
      roots += pr;
      s.check(pr == (multiplicative_order(a, pv) == pv - 1),
              [&] { return cat("is_primitive_root(a=", a, ", p=", pv, ") disagrees with multiplicative_order"); });
    }
    s.check(roots == arithmetic_functions(pv - 1).phi,
            [&] { return cat("is_primitive_root(p=", pv, "): count != phi(p-1)"); });
  }
}

void suite_fermat_quotient(Suite& s, std::mt19937_64& rng, const SelftestOptions& opt) {
  bool fault_pending = opt.inject_quotient_fault;
  for (u64 pv : odd_primes_up_to(97)) {
    const OddPrime p(pv);
    QuotientTable table(p, 2000);
    if (fault_pending) {
      // Flip a defined entry to a different value.
      const u64 n = 2;
      table.corrupt_entry_for_testing(n, (table[n].value() + 1) % pv);
      fault_pending = false;
    }
    for (u64 n = 1; n <= table.size(); ++n) {
      s.check(table[n] == fermat_quotient(p, n), [&] {
        return cat("quotient_table(p=", pv, ", N=2000) entry n=", n, " differs from fermat_quotient");
      });
    }
    const ResidueHistogram h = value_histogram(table);
    s.check(collision_count(table) == h.sum_of_squares(),
            [&] { return cat("collision_count(p=", pv, ", N=2000) != sum of squared counts"); });
    s.check(image_size(table) >= cauchy_lower_bound(h).ceil(),
            [&] { return cat("image_size(p=", pv, ", N=2000) below the Cauchy bound"); });
  }
  const auto primes = odd_primes_up_to(100'000);
  for (int i = 0; i < 10'000; ++i) {
    const OddPrime p(primes[uniform(rng, 0, primes.size() - 1)]);
    const u64 pv = p.value();
    u64 u = uniform(rng, 1, p.squared() - 1), v = uniform(rng, 1, p.squared() - 1);
    if (u % pv == 0) ++u;
    if (v % pv == 0) ++v;
    const u64 qu = fermat_quotient(p, u).value(), qv = fermat_quotient(p, v).value();
    const u64 quv = fermat_quotient(p, mul_mod(u, v, p.squared())).value();
    s.check(quv == (qu + qv) % pv,
            [&] { return cat("fermat_quotient(p=", pv, ") additivity fails for u=", u, ", v=", v); });
    s.check(fermat_quotient(p, u + p.squared()) == fermat_quotient(p, u),
            [&] { return cat("fermat_quotient(p=", pv, ", u=", u, ") not periodic mod p^2"); });
  }
}

void suite_char_sums(Suite& s, std::mt19937_64& rng, const SelftestOptions&) {
  for (u64 pv : odd_primes_up_to(23)) {
    const OddPrime p(pv);
    for (u64 a = 1; a < pv; ++a) {
      const HbCharacter chi(p, a);
      for (u64 N : {u64{1}, pv, p.squared()}) {
        Complex partial{0.0, 0.0};
        for (u64 n = 1; n <= N; ++n) partial += chi(n);
        const Complex direct = exp_sum_direct(p, a, N);
        s.check(std::abs(partial - direct) < 1e-6 * static_cast<double>(N), [&] {
          return cat("hb_character(p=", pv, ", a=", a, ") partial sum differs from exp_sum_direct at N=", N);
        });
      }
      const double tau = std::abs(gauss_sum(chi));
      s.check(std::abs(tau - static_cast<double>(pv)) < 1e-9 * static_cast<double>(pv),
              [&] { return cat("gauss_sum(hb_character(p=", pv, ", a=", a, ")) magnitude != p"); });
      for (int i = 0; i < 20; ++i) {
        const u64 m = uniform(rng, 1, p.squared() - 1), n = uniform(rng, 1, p.squared() - 1);
        if (m % pv == 0 || n % pv == 0) continue;
        s.check(std::abs(chi(mul_mod(m, n, p.squared())) - chi(m) * chi(n)) < 1e-9,
                [&] { return cat("hb_character(p=", pv, ", a=", a, ") not multiplicative at ", m, ", ", n); });
      }
    }
  }
  const auto primes = odd_primes_up_to(300);
  for (int i = 0; i < 200; ++i) {
    const OddPrime p(primes[uniform(rng, 0, primes.size() - 1)]);
    const u64 N = uniform(rng, 1, 3000), a = uniform(rng, 0, p.value() - 1);
    const ResidueHistogram h = value_histogram(QuotientTable(p, N));
    s.check(std::abs(exp_sum_from_histogram(h, a) - exp_sum_direct(p, a, N)) < 1e-6, [&] {
      return cat("exp_sum_from_histogram(p=", p.value(), ", a=", a, ", N=", N, ") differs from direct");
    });
  }
  for (int i = 0; i < 500; ++i) {
    const u64 r = uniform(rng, 2, 500);
    const u64 b = uniform(rng, 1, r / 2);
    const u64 K = uniform(rng, 0, 1000), L = uniform(rng, 1, 1000);
    Complex sum{0.0, 0.0};
    for (u64 n = K + 1; n <= K + L; ++n) sum += unit_root(mul_mod(b, n % r, r), r);
    const double bound = std::min(static_cast<double>(L), static_cast<double>(r) / (2.0 * b)) + 1.0;
    s.check(std::abs(sum) <= bound,
            [&] { return cat("geometric sum bound fails for r=", r, ", b=", b, ", K=", K, ", L=", L); });
  }
  for (u64 r = 1; r <= 60; ++r) {
    for (u64 z = 0; z <= 2 * r; ++z) {
      // Indices b z mod r over a full period, b in [-r/2, r/2).
      std::vector<u64> hits(r, 0);
      const std::int64_t lo = -static_cast<std::int64_t>(r / 2);
      for (std::int64_t b = lo; b < lo + static_cast<std::int64_t>(r); ++b) {
        const u64 bm = static_cast<u64>(((b % static_cast<std::int64_t>(r)) + static_cast<std::int64_t>(r)) %
                                        static_cast<std::int64_t>(r));
        ++hits[mul_mod(bm, z % r, r)];
      }
      const bool divides = z % r == 0;
      Complex total{0.0, 0.0};
      for (u64 k = 0; k < r; ++k) total += static_cast<double>(hits[k]) * unit_root(k, r);
      const double expected = divides ? static_cast<double>(r) : 0.0;
      s.check(divides == (hits[0] == r) && std::abs(total - expected) < 1e-9 * static_cast<double>(r),
              [&] { return cat("orthogonality fails for r=", r, ", z=", z); });
    }
  }
}

void suite_sieve_lab(Suite& s, std::mt19937_64& rng, const SelftestOptions&) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const u64 K = uniform(rng, 1, 64), M = uniform(rng, 1, 128);
    std::vector<Complex> c(K);
    for (auto& x : c) x = {gauss(rng), gauss(rng)};
    const TrigPolynomial poly(std::move(c));
    s.check(parseval_check(poly, M) < 1e-6 * static_cast<double>(M) * poly.energy(),
            [&] { return cat("parseval_check(K=", K, ", M=", M, ") residual too large"); });
    double prev = 0.0;
    for (u64 R = 1; R <= 4; ++R) {
      const double lhs = large_sieve_lhs(poly, R);
      s.check(lhs >= prev, [&] { return cat("large_sieve_lhs(K=", K, ") decreases at R=", R); });
      prev = lhs;
    }
  }
  for (u64 M : {u64{3}, u64{4}, u64{6}}) {
    for (unsigned nu = 1; nu <= 3; ++nu) {
      u64 K = 1;
      for (unsigned j = 0; j < nu; ++j) K *= M;
      for (u64 k = 1; k <= K; ++k) {
        const u64 b = uniform(rng, 0, M - 1);
        s.check(std::abs(rho_coefficient(M, b, nu, k)) <=
                    static_cast<double>(ordered_factorization_count(M, nu, k)) + 1e-9,
                [&] { return cat("rho_coefficient(M=", M, ", b=", b, ", nu=", nu, ", k=", k, ") exceeds count"); });
      }
    }
  }
}

void suite_subgroup_ratios(Suite& s, std::mt19937_64& rng, const SelftestOptions& opt) {
  for (u64 pv : odd_primes_up_to(31)) {
    const OddPrime p(pv);
    const SubgroupModM G = pth_power_residues(p);
    s.check(G.order() == pv - 1, [&] { return cat("pth_power_residues(p=", pv, "): order != p-1"); });
    for (u64 a : G.elements()) {
      for (u64 b : G.elements()) {
        s.check(G.contains(mul_mod(a, b, p.squared())),
                [&] { return cat("pth_power_residues(p=", pv, ") not closed at ", a, "*", b); });
      }
    }
    const u64 Nmax = (p.squared() - 1) / 2;
    const auto ratios = count_ratios_profile(G, Nmax);
    const auto collisions = collision_profile(QuotientTable(p, Nmax));
    for (u64 N = 1; N <= Nmax; ++N) {
      s.check(collisions[N - 1] <= ratios[N - 1],
              [&] { return cat("collision_vs_ratio_check(p=", pv, ", N=", N, ") fails"); });
    }
  }
  for (int i = 0; i < 30; ++i) {
    const u64 m = uniform(rng, 3, 200);
    std::vector<u64> gens;
    for (int j = 0; j < 2; ++j) {
      u64 g = uniform(rng, 1, m - 1);
      while (std::gcd(g, m) != 1) g = uniform(rng, 1, m - 1);
      gens.push_back(g);
    }
    const SubgroupModM G = SubgroupModM::generated_by(m, gens);
    const u64 Z = uniform(rng, 1, (m - 1) / 2);
    u64 brute = 0;
    for (u64 w : G.elements()) {
      for (std::int64_t x = -static_cast<std::int64_t>(Z); x <= static_cast<std::int64_t>(Z); ++x) {
        for (std::int64_t y = -static_cast<std::int64_t>(Z); y <= static_cast<std::int64_t>(Z); ++y) {
          if (x == 0 || y == 0) continue;
          const std::int64_t diff = static_cast<std::int64_t>(w) * x - y;
          brute += (diff % static_cast<std::int64_t>(m) == 0);
        }
      }
    }
    s.check(count_ratios(G, Z, opt.threads) == brute,
            [&] { return cat("count_ratios(m=", m, ", t=", G.order(), ", Z=", Z, ") differs from brute force"); });
  }
}

void suite_prim_root(Suite& s, std::mt19937_64&, const SelftestOptions&) {
  for (u64 pv : {u64{7}, u64{11}, u64{13}, u64{101}}) {
    const OddPrime p(pv);
    const auto logs = std::make_shared<const DiscreteLogTable>(p);
    u64 total = 0;
    for (u64 a = 0; a < pv; ++a) {
      const IndicatorReport r = primroot_indicator(logs, a);
      total += static_cast<u64>(r.indicator);
      s.check((r.indicator == 1) == is_primitive_root(a, p),
              [&] { return cat("primroot_indicator(p=", pv, ", a=", a, ") disagrees with is_primitive_root"); });
    }
    s.check(total == arithmetic_functions(pv - 1).phi,
            [&] { return cat("primroot_indicator(p=", pv, "): sum != phi(p-1)"); });
  }
  for (const ScanRow& row : theorem4_exponent_scan(3, 300)) {
    s.check(row.n_min.has_value() && row.verified,
            [&] { return cat("smallest_primroot_quotient(p=", row.p, ", cap=p^2) not found or unverified"); });
  }
}

void suite_experiment_cli(Suite& s, std::mt19937_64&, const SelftestOptions& opt) {
  const auto render = [&](unsigned threads) {
    Report scan = schema::scan_report();
    for (const ScanRow& row : theorem4_exponent_scan(3, 400, threads)) schema::add_scan_row(scan, row);
    Report avg = schema::theorem1_report({0.05});
    AverageOptions ao;
    ao.threads = threads;
    ao.kappas = {0.05};
    schema::add_theorem1_row(avg, theorem1_average(64, 2, NSelector::power(1, 2), ao));
    return scan.to_csv() + avg.to_csv();
  };
  const std::string one = render(1);
  const std::string many = render(std::max(2u, opt.threads));
  s.check(one == many, [&] { return std::string("scan/avg reports differ between thread counts"); });
  const CsvTable parsed = parse_csv(one.substr(0, one.find("P,nu")));
  s.check(parsed.header == schema::scan_report().columns(),
          [&] { return std::string("scan CSV header does not round-trip"); });
}

}  // namespace

bool SelftestResult::ok() const {
  for (const auto& s : suites) {
    if (!s.passed) return false;
  }
  return true;
}

SelftestResult run_selftest(const SelftestOptions& options) {
  using SuiteFn = void (*)(Suite&, std::mt19937_64&, const SelftestOptions&);
  const std::vector<std::pair<const char*, SuiteFn>> suites{
      {"core-arith", suite_core_arith},           {"fermat-quotient", suite_fermat_quotient},
      {"char-sums", suite_char_sums},             {"sieve-lab", suite_sieve_lab},
      {"subgroup-ratios", suite_subgroup_ratios}, {"prim-root", suite_prim_root},
      {"experiment-cli", suite_experiment_cli},
  };
  SelftestResult result;
  std::uint64_t index = 0;
  for (const auto& [name, fn] : suites) {
    SuiteOutcome outcome;
    outcome.module = name;
    // Each suite gets its own stream so suites stay independent of each other.
    std::mt19937_64 rng(options.seed ^ (0x9E3779B97F4A7C15ull * ++index));
    Suite suite(outcome.checks);
    try {
      fn(suite, rng, options);
    } catch (const CheckFailed& f) {
      outcome.passed = false;
      outcome.failure = f.what;
    } catch (const std::exception& e) {
      outcome.passed = false;
      outcome.failure = std::string("unexpected exception: ") + e.what();
    }
    result.suites.push_back(outcome);
    if (!outcome.passed) break;
  }
  return result;
}

}  // namespace fermatq
