#include "fermatq/quotient.hpp"

#include <array>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "fermatq/errors.hpp"

namespace fermatq {

namespace {

constexpr std::uint32_t kUnset = 0xFFFFFFFEu;
constexpr std::array<char, 4> kMagic{'F', 'Q', 'T', '1'};

void put_le(std::ostream& out, u64 v, int bytes) {
  std::array<char, 8> buf{};
  for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf.data(), bytes);
}

u64 get_le(std::istream& in, int bytes) {
  std::array<unsigned char, 8> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), bytes);
  if (!in) throw ArgumentError("QuotientTable: truncated binary dump");
  u64 v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<u64>(buf[i]) << (8 * i);
  return v;
}

std::uint32_t quotient_of_unit(u64 pv, u64 p2, u64 u) {
  const u64 x = mod_pow(u % p2, pv - 1, p2);
  // x = 1 (mod p) by Fermat, so the division is exact.
  return static_cast<std::uint32_t>(((x - 1) / pv) % pv);
}

}  // namespace

QuotientValue fermat_quotient(const OddPrime& p, u64 u) {
  if (u % p.value() == 0) return QuotientValue::undefined();
  return QuotientValue::of(quotient_of_unit(p.value(), p.squared(), u));
}

QuotientTable::QuotientTable(const OddPrime& p, u64 N, u64 cap) : p_(p) {
  if (N == 0) throw ArgumentError("quotient_table: N must be >= 1");
  if (N > cap) {
    throw BudgetExceeded("quotient_table: N = " + std::to_string(N) + " exceeds table cap " +
                         std::to_string(cap));
  }
  const u64 pv = p.value();
  const u64 p2 = p.squared();
  entries_.assign(N, kUnset);
  for (u64 n = pv; n <= N; n += pv) entries_[n - 1] = QuotientValue::kUndefined;
  entries_[0] = 0;

  // Linear sieve. Each composite n coprime to p is written exactly once as
  // i * q with q its least prime factor, and q_p(n) = q_p(i) + q_p(q).
  std::vector<std::uint32_t> primes;
  for (u64 i = 2; i <= N; ++i) {
    std::uint32_t& qi = entries_[i - 1];
    if (qi == QuotientValue::kUndefined) continue;
    if (qi == kUnset) {
      qi = quotient_of_unit(pv, p2, i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    const u64 qi_val = qi;
    for (std::uint32_t q : primes) {
      const u64 n = i * q;
      if (n > N) break;
      const u64 v = qi_val + entries_[q - 1];
      entries_[n - 1] = static_cast<std::uint32_t>(v >= pv ? v - pv : v);
      if (i % q == 0) break;
    }
  }
}

void QuotientTable::write_binary(std::ostream& out) const {
  out.write(kMagic.data(), kMagic.size());
  put_le(out, p_.value(), 8);
  put_le(out, entries_.size(), 8);
  for (std::uint32_t e : entries_) put_le(out, e, 4);
}

QuotientTable QuotientTable::read_binary(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ArgumentError("QuotientTable: bad magic in binary dump");
  const OddPrime p(get_le(in, 8));
  const u64 N = get_le(in, 8);
  if (N == 0 || N > kDefaultTableCap) throw ArgumentError("QuotientTable: bad length in binary dump");
  std::vector<std::uint32_t> entries(N);
  for (u64 n = 1; n <= N; ++n) {
    const auto e = static_cast<std::uint32_t>(get_le(in, 4));
    const bool should_be_undefined = (n % p.value() == 0);
    if ((e == QuotientValue::kUndefined) != should_be_undefined ||
        (!should_be_undefined && e >= p.value())) {
      throw ArgumentError("QuotientTable: invalid entry at n = " + std::to_string(n));
    }
    entries[n - 1] = e;
  }
  return QuotientTable(p, std::move(entries));
}

u64 ResidueHistogram::nonzero_cells() const {
  u64 k = 0;
  for (u64 c : counts) k += (c != 0);
  return k;
}

u64 ResidueHistogram::sum_of_squares() const {
  u64 s = 0;
  for (u64 c : counts) s += c * c;
  return s;
}

std::optional<u64> smallest_nonzero(const OddPrime& p, u64 cap) {
  for (u64 n = 2; n <= cap; ++n) {
    const QuotientValue q = fermat_quotient(p, n);
    if (q.defined() && q.value() != 0) return n;
  }
  return std::nullopt;
}

u64 image_size(const QuotientTable& table) {
  return value_histogram(table).nonzero_cells();
}

ResidueHistogram value_histogram(const QuotientTable& table) {
  ResidueHistogram h{table.prime().value(), std::vector<u64>(table.prime().value(), 0), 0};
  for (std::uint32_t e : table.raw()) {
    if (e == QuotientValue::kUndefined) continue;
    ++h.counts[e];
    ++h.total;
  }
  return h;
}

ResidueHistogram prime_value_histogram(const OddPrime& p, u64 N, u64 cap) {
  const QuotientTable table(p, N, cap);
  ResidueHistogram h{p.value(), std::vector<u64>(p.value(), 0), 0};
  for (u64 l : primes_up_to(N)) {
    if (l == p.value()) continue;
    ++h.counts[table[l].value()];
    ++h.total;
  }
  return h;
}

u64 collision_count(const QuotientTable& table) {
  return value_histogram(table).sum_of_squares();
}

std::vector<u64> collision_profile(const QuotientTable& table) {
  // Adding n with value a adds the pairs (n, v), (v, n) for the counts[a]
  // earlier v with the same value, and (n, n).
  std::vector<u64> counts(table.prime().value(), 0);
  std::vector<u64> profile(table.size(), 0);
  u64 w = 0;
  for (u64 n = 1; n <= table.size(); ++n) {
    const QuotientValue q = table[n];
    if (q.defined()) {
      w += 2 * counts[q.value()] + 1;
      ++counts[q.value()];
    }
    profile[n - 1] = w;
  }
  return profile;
}

Rational cauchy_lower_bound(const ResidueHistogram& hist) {
  if (hist.total == 0) throw ArgumentError("cauchy_lower_bound: empty histogram");
  u64 sum = 0;
  for (u64 c : hist.counts) sum += c;
  const u64 num = sum * sum;
  const u64 den = hist.sum_of_squares();
  const u64 g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

}  // namespace fermatq
