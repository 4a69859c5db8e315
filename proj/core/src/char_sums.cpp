#include "fermatq/char_sums.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fermatq {

namespace {

// 16 bytes per entry; 1 GiB.
constexpr u64 kRootTableCap = u64{1} << 26;

}  // namespace

Complex unit_root(u64 k, u64 r) {
  k %= r;
  if (k == 0) return {1.0, 0.0};
  if (2 * k == r) return {-1.0, 0.0};
  if (4 * k == r) return {0.0, 1.0};
  if (4 * k == 3 * r) return {0.0, -1.0};
  // Evaluate at the representative of smallest magnitude in (-r/2, r/2].
  const double num = (2 * k > r) ? -static_cast<double>(r - k) : static_cast<double>(k);
  const double theta = 2.0 * std::numbers::pi * num / static_cast<double>(r);
  return {std::cos(theta), std::sin(theta)};
}

RootTable::RootTable(u64 r) : r_(r) {
  if (r == 0) throw ArgumentError("RootTable: modulus must be >= 1");
  if (r > kRootTableCap) {
    throw BudgetExceeded("RootTable: modulus " + std::to_string(r) + " exceeds table cap");
  }
  roots_.resize(r);
  for (u64 k = 0; 2 * k <= r; ++k) {
    roots_[k] = unit_root(k, r);
    if (k != 0) roots_[r - k] = std::conj(roots_[k]);
  }
}

Complex exp_sum_direct(const OddPrime& p, u64 a, u64 N) {
  const u64 pv = p.value();
  a %= pv;
  const QuotientTable table(p, N);
  const RootTable roots(pv);
  Complex s{0.0, 0.0};
  for (std::uint32_t e : table.raw()) {
    if (e == QuotientValue::kUndefined) continue;
    s += roots[mul_mod(a, e, pv)];
  }
  return s;
}

Complex exp_sum_from_histogram(const ResidueHistogram& hist, u64 a) {
  const u64 pv = hist.p;
  a %= pv;
  Complex s{0.0, 0.0};
  for (u64 q = 0; q < pv; ++q) {
    if (hist.counts[q] == 0) continue;
    s += static_cast<double>(hist.counts[q]) * unit_root(mul_mod(a, q, pv), pv);
  }
  return s;
}

MaxExpSum max_exp_sum(const ResidueHistogram& hist) {
  const u64 pv = hist.p;
  std::vector<u64> values;
  std::vector<double> weights;
  for (u64 q = 0; q < pv; ++q) {
    if (hist.counts[q] == 0) continue;
    values.push_back(q);
    weights.push_back(static_cast<double>(hist.counts[q]));
  }
  const RootTable roots(pv);
  // phase[j] tracks a * values[j] mod p exactly as a advances.
  std::vector<u64> phase(values.size(), 0);
  MaxExpSum best{0, -1.0, {}};
  for (u64 a = 1; a < pv; ++a) {
    Complex s{0.0, 0.0};
    for (std::size_t j = 0; j < values.size(); ++j) {
      phase[j] += values[j];
      if (phase[j] >= pv) phase[j] -= pv;
      s += weights[j] * roots[phase[j]];
    }
    const double v = std::abs(s);
    if (v > best.value) best = {a, v, s};
  }
  return best;
}

MaxExpSum max_exp_sum(const OddPrime& p, u64 N) {
  return max_exp_sum(value_histogram(QuotientTable(p, N)));
}

HbCharacter::HbCharacter(const OddPrime& p, u64 a)
    : p_(p), a_(a % p.value()), roots_(std::make_shared<const RootTable>(p.value())) {
  if (a_ == 0) throw ArgumentError("hb_character: a must be coprime to p");
  // Primitivity: nontrivial on the kernel 1 + pZ of reduction mod p.
  // q_p(1 + p) = p - 1, so chi(1 + p) = e_p(-a) != 1.
  const QuotientValue e = exponent(1 + p.value());
  if (!e.defined() || e.value() == 0) throw InternalError("hb_character: character is not primitive");
}

QuotientValue HbCharacter::exponent(u64 n) const {
  const QuotientValue q = fermat_quotient(p_, n);
  if (!q.defined()) return q;
  return QuotientValue::of(static_cast<std::uint32_t>(mul_mod(a_, q.value(), p_.value())));
}

Complex HbCharacter::operator()(u64 n) const {
  const QuotientValue e = exponent(n);
  if (!e.defined()) return {0.0, 0.0};
  return (*roots_)[e.value()];
}

DiscreteLogTable::DiscreteLogTable(const OddPrime& p)
    : p_(p), g_(least_primitive_root(p)), index_(p.value(), 0), roots_(p.value() - 1) {
  u64 x = 1;
  for (u64 j = 0; j + 1 < p.value(); ++j) {
    index_[x] = static_cast<std::uint32_t>(j);
    x = mul_mod(x, g_, p.value());
  }
}

CharacterModP::CharacterModP(std::shared_ptr<const DiscreteLogTable> logs, u64 k)
    : logs_(std::move(logs)), k_(k % (logs_->prime().value() - 1)) {}

CharacterModP::CharacterModP(const OddPrime& p, u64 k)
    : CharacterModP(std::make_shared<const DiscreteLogTable>(p), k) {}

CharacterModP CharacterModP::quadratic(std::shared_ptr<const DiscreteLogTable> logs) {
  const u64 k = (logs->prime().value() - 1) / 2;
  return CharacterModP(std::move(logs), k);
}

std::vector<u64> CharacterModP::exponents_of_order(const OddPrime& p, u64 d) {
  const u64 group = p.value() - 1;
  if (d == 0 || group % d != 0) {
    throw ArgumentError("exponents_of_order: d = " + std::to_string(d) + " does not divide p - 1");
  }
  std::vector<u64> ks;
  for (u64 j = 0; j < d; ++j) {
    if (std::gcd(j, d) == 1) ks.push_back(group / d * j);
  }
  return ks;
}

Complex CharacterModP::operator()(u64 x) const {
  const u64 pv = modulus();
  if (x % pv == 0) return {0.0, 0.0};
  return logs_->roots()[mul_mod(k_, logs_->index(x), pv - 1)];
}

Complex eta_quotient_sum(const CharacterModP& eta, u64 N) {
  if (eta.trivial()) throw ArgumentError("eta_quotient_sum: eta must be nontrivial");
  const QuotientTable table(eta.prime(), N);
  Complex s{0.0, 0.0};
  for (std::uint32_t e : table.raw()) {
    if (e == QuotientValue::kUndefined) continue;
    s += eta(e);
  }
  return s;
}

double hb_bound_rhs(u64 p, u64 N, unsigned nu) {
  if (nu == 0) throw ArgumentError("hb_bound_rhs: nu must be >= 1");
  const double v = nu;
  return std::pow(static_cast<double>(N), 1.0 - 1.0 / v) *
         std::pow(static_cast<double>(p), (v + 1.0) / (2.0 * v * v));
}

double eta_bound_rhs(u64 p, u64 N, unsigned nu) {
  if (nu == 0) throw ArgumentError("eta_bound_rhs: nu must be >= 1");
  const double v = nu;
  return std::pow(static_cast<double>(N), 1.0 - 1.0 / v) *
         std::pow(static_cast<double>(p), (5.0 * v + 1.0) / (4.0 * v * v));
}

}  // namespace fermatq
