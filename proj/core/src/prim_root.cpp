#include "fermatq/prim_root.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fermatq/errors.hpp"
#include "fermatq/parallel.hpp"
#include "fermatq/quotient.hpp"

namespace fermatq {

namespace {

constexpr u64 kInitialSearch = 256;

// Scans q_p(n) for n <= cap in growing table prefixes until pred accepts.
template <typename Pred>
std::optional<u64> first_quotient_matching(const OddPrime& p, u64 cap, Pred pred) {
  u64 scanned = 0;
  u64 N = std::min(cap, kInitialSearch);
  while (scanned < cap) {
    const QuotientTable table(p, N);
    for (u64 n = scanned + 1; n <= N; ++n) {
      const QuotientValue q = table[n];
      if (q.defined() && pred(q.value())) return n;
    }
    scanned = N;
    N = std::min(cap, 2 * N);
  }
  return std::nullopt;
}

}  // namespace

IndicatorReport primroot_indicator(const std::shared_ptr<const DiscreteLogTable>& logs, u64 a) {
  const OddPrime& p = logs->prime();
  const u64 group = p.value() - 1;
  const Factorization& f = p.group_order_factors();
  Complex total{0.0, 0.0};
  u64 terms = 0;
  for (u64 d : f.divisors()) {
    const ArithmeticFunctions af = arithmetic_functions(d);
    if (af.mu == 0) continue;
    Complex inner{0.0, 0.0};
    for (u64 k : CharacterModP::exponents_of_order(p, d)) {
      inner += CharacterModP(logs, k)(a);
      ++terms;
    }
    total += (static_cast<double>(af.mu) / static_cast<double>(af.phi)) * inner;
  }
  const double scale = static_cast<double>(arithmetic_functions(f).phi) / static_cast<double>(group);
  total *= scale;
  const double rounded = std::round(total.real());
  if (std::abs(total.real() - rounded) >= 1e-6 || std::abs(total.imag()) >= 1e-6 ||
      (rounded != 0.0 && rounded != 1.0)) {
    throw InternalError("primroot_indicator: value is not 0 or 1 for p = " + std::to_string(p.value()) +
                        ", a = " + std::to_string(a));
  }
  return IndicatorReport{p.value(), a % p.value(), static_cast<int>(rounded), terms, total};
}

IndicatorReport primroot_indicator(const OddPrime& p, u64 a) {
  return primroot_indicator(std::make_shared<const DiscreteLogTable>(p), a);
}

std::optional<u64> smallest_primroot_quotient(const OddPrime& p, u64 cap) {
  // 0 is never a generator, so it is skipped without a test.
  return first_quotient_matching(p, cap, [&](u64 q) { return q != 0 && is_primitive_root(q, p); });
}

std::optional<u64> smallest_dth_nonresidue_quotient(const OddPrime& p, u64 d, u64 cap) {
  if (d < 2 || (p.value() - 1) % d != 0) {
    throw ArgumentError("smallest_dth_nonresidue_quotient: need d >= 2 with d | p - 1, got d = " +
                        std::to_string(d));
  }
  const DiscreteLogTable logs(p);
  // A unit is a d-th power iff d divides its index; 0 = 0^d is a d-th power.
  return first_quotient_matching(p, cap, [&](u64 q) { return q != 0 && logs.index(q) % d != 0; });
}

double lemma3_envelope(u64 p, u64 card_a, u64 card_b) {
  const double a = static_cast<double>(card_a);
  const double b = static_cast<double>(card_b);
  const double pp = static_cast<double>(p);
  double best = std::numeric_limits<double>::infinity();
  for (int nu = 1; nu <= 3; ++nu) {
    const double a_pow = std::pow(a, 1.0 - 1.0 / (2.0 * nu));
    const double v = a_pow * b * std::pow(pp, 1.0 / (4.0 * nu)) +
                     a_pow * std::sqrt(b) * std::pow(pp, 1.0 / (2.0 * nu));
    best = std::min(best, v);
  }
  return best;
}

DoubleSumReport double_char_sum(const CharacterModP& eta, const std::vector<u64>& A,
                                const std::vector<u64>& B) {
  if (eta.trivial()) throw ArgumentError("double_char_sum: eta must be nontrivial");
  const u64 pv = eta.modulus();
  for (const auto* set : {&A, &B}) {
    for (u64 x : *set) {
      if (x >= pv) throw ArgumentError("double_char_sum: set element outside [0, p-1]");
    }
  }
  Complex s{0.0, 0.0};
  for (u64 a : A) {
    for (u64 b : B) {
      const u64 x = a + b;
      s += eta(x >= pv ? x - pv : x);
    }
  }
  DoubleSumReport r{};
  r.p = pv;
  r.order_of_eta = eta.order();
  r.card_a = A.size();
  r.card_b = B.size();
  r.sum = s;
  r.abs_sum = std::abs(s);
  r.lemma3_envelope = lemma3_envelope(pv, A.size(), B.size());
  const double cells = static_cast<double>(A.size()) * static_cast<double>(B.size());
  r.ratio = cells > 0 ? r.abs_sum / cells : 0.0;
  return r;
}

namespace {

// First n in [1, limit] for each distinct quotient value, in order of n.
std::pair<std::vector<u64>, std::vector<u64>> first_occurrences(const OddPrime& p, u64 limit) {
  const QuotientTable table(p, limit);
  std::vector<bool> seen(p.value(), false);
  std::vector<u64> ns, values;
  for (u64 n = 1; n <= limit; ++n) {
    const QuotientValue q = table[n];
    if (!q.defined() || seen[q.value()]) continue;
    seen[q.value()] = true;
    ns.push_back(n);
    values.push_back(q.value());
  }
  return {ns, values};
}

}  // namespace

SumsetExperiment quotient_sumset_experiment(const CharacterModP& eta, u64 U, u64 V) {
  if (U == 0 || V == 0) throw ArgumentError("quotient_sumset_experiment: U and V must be >= 1");
  auto [u_set, u_vals] = first_occurrences(eta.prime(), U);
  auto [v_set, v_vals] = first_occurrences(eta.prime(), V);
  SumsetExperiment out;
  out.report = double_char_sum(eta, u_vals, v_vals);
  out.u_set = std::move(u_set);
  out.v_set = std::move(v_set);
  return out;
}

PrimitiveSumCount sumset_primitive_count(const OddPrime& p, u64 U, u64 V) {
  if (p.value() > 101) throw ArgumentError("sumset_primitive_count: restricted to p <= 101");
  if (U == 0 || V == 0) throw ArgumentError("sumset_primitive_count: U and V must be >= 1");
  const auto [u_set, u_vals] = first_occurrences(p, U);
  const auto [v_set, v_vals] = first_occurrences(p, V);
  const auto logs = std::make_shared<const DiscreteLogTable>(p);
  PrimitiveSumCount c{0, 0.0};
  Complex expanded{0.0, 0.0};
  for (u64 qu : u_vals) {
    for (u64 qv : v_vals) {
      const u64 s = (qu + qv) % p.value();
      if (is_primitive_root(s, p)) ++c.direct;
      expanded += primroot_indicator(logs, s).value;
    }
  }
  c.via_characters = expanded.real();
  return c;
}

std::vector<ScanRow> theorem4_exponent_scan(u64 p_min, u64 p_max, unsigned threads) {
  if (p_min < 3 || p_min > p_max) throw ArgumentError("theorem4_exponent_scan: need 3 <= p_min <= p_max");
  if (p_max >= OddPrime::kMax) throw ArgumentError("theorem4_exponent_scan: p_max beyond cap");
  std::vector<u64> primes;
  for (u64 p : primes_up_to(p_max)) {
    if (p >= p_min) primes.push_back(p);
  }
  return parallel_map(primes.size(), threads, [&](std::size_t i) {
    const OddPrime p(primes[i]);
    ScanRow row{p.value(), std::nullopt, 0.0, false};
    row.n_min = smallest_primroot_quotient(p, std::min(p.squared(), kDefaultTableCap));
    if (row.n_min) {
      const QuotientValue q = fermat_quotient(p, *row.n_min);
      row.verified = q.defined() && multiplicative_order(q.value(), p.value()) == p.value() - 1;
      row.exponent = std::log(static_cast<double>(*row.n_min)) / std::log(static_cast<double>(p.value()));
    }
    return row;
  });
}

}  // namespace fermatq
