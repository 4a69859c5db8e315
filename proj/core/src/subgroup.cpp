#include "fermatq/subgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fermatq/errors.hpp"
#include "fermatq/parallel.hpp"
#include "fermatq/quotient.hpp"

namespace fermatq {

namespace {

constexpr u64 kBitsetLimit = u64{1} << 24;

void check_height(u64 m, u64 Z, const char* who) {
  if (Z == 0) throw ArgumentError(std::string(who) + ": Z must be >= 1");
  if (2 * Z >= m) {
    throw ArgumentError(std::string(who) + ": Z must satisfy 2Z < m (got Z = " + std::to_string(Z) +
                        ", m = " + std::to_string(m) + ")");
  }
}

// Pairs (w, x), w in elements[w_begin, w_end), 1 <= x <= Z, with w x mod m
// in [1, Z] U [m - Z, m - 1].
u64 count_positive_x(const std::vector<u64>& elements, std::size_t w_begin, std::size_t w_end,
                     u64 m, u64 Z) {
  u64 count = 0;
  for (std::size_t i = w_begin; i < w_end; ++i) {
    const u64 w = elements[i];
    u64 y = 0;
    for (u64 x = 1; x <= Z; ++x) {
      y += w;
      if (y >= m) y -= m;
      if (y <= Z || y >= m - Z) ++count;
    }
  }
  return count;
}

}  // namespace

SubgroupModM::SubgroupModM(u64 m, std::vector<u64> elements) : m_(m), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  if (m_ <= kBitsetLimit) {
    bits_.assign(m_, false);
    for (u64 e : elements_) bits_[e] = true;
  } else {
    hashed_.insert(elements_.begin(), elements_.end());
  }
}

bool SubgroupModM::contains(u64 x) const {
  x %= m_;
  return m_ <= kBitsetLimit ? bits_[x] : hashed_.count(x) != 0;
}

SubgroupModM SubgroupModM::from_elements(u64 m, std::vector<u64> elements) {
  if (m < 2) throw ArgumentError("SubgroupModM: modulus must be >= 2");
  for (u64& e : elements) {
    e %= m;
    if (std::gcd(e, m) != 1) throw ArgumentError("SubgroupModM: element not coprime to modulus");
  }
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  SubgroupModM g(m, std::move(elements));
  if (!g.contains(1)) throw ArgumentError("SubgroupModM: identity missing");
  for (u64 a : g.elements_) {
    // A finite set closed under products is a group; inverses follow, but
    // check the inverse of each element directly as well.
    bool has_inverse = false;
    for (u64 b : g.elements_) {
      const u64 ab = mul_mod(a, b, m);
      if (!g.contains(ab)) throw ArgumentError("SubgroupModM: not closed under multiplication");
      has_inverse = has_inverse || ab == 1;
    }
    if (!has_inverse) throw ArgumentError("SubgroupModM: missing inverse");
  }
  return g;
}

SubgroupModM SubgroupModM::generated_by(u64 m, const std::vector<u64>& generators) {
  if (m < 2) throw ArgumentError("SubgroupModM: modulus must be >= 2");
  std::vector<u64> elements{1};
  std::unordered_set<u64> seen{1};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (u64 g : generators) {
      g %= m;
      if (std::gcd(g, m) != 1) throw ArgumentError("SubgroupModM: generator not coprime to modulus");
      const u64 next = mul_mod(elements[i], g, m);
      if (seen.insert(next).second) elements.push_back(next);
    }
  }
  return SubgroupModM(m, std::move(elements));
}

SubgroupModM pth_power_residues(const OddPrime& p, u64 cap) {
  if (p.value() > cap) {
    throw BudgetExceeded("pth_power_residues: p = " + std::to_string(p.value()) + " exceeds cap");
  }
  // x^p mod p^2 depends only on x mod p, and x -> x^p is injective on
  // residues 1..p-1 mod p^2, giving all p - 1 elements.
  const u64 p2 = p.squared();
  std::vector<u64> elements;
  elements.reserve(p.value() - 1);
  for (u64 x = 1; x < p.value(); ++x) {
    const u64 w = mod_pow(x, p.value(), p2);
    if (mod_pow(w, p.value() - 1, p2) != 1) throw InternalError("pth_power_residues: w^(p-1) != 1");
    elements.push_back(w);
  }
  SubgroupModM g(p2, std::move(elements));
  if (g.order() != p.value() - 1) throw InternalError("pth_power_residues: wrong order");
  return g;
}

u64 count_ratios(const SubgroupModM& G, u64 Z, unsigned threads) {
  const u64 m = G.modulus();
  check_height(m, Z, "count_ratios");
  const auto& el = G.elements();
  // x and -x give y and -y; the representative set is symmetric, so only
  // positive x need to be scanned.
  const unsigned chunks = std::max(1u, threads);
  const std::size_t step = (el.size() + chunks - 1) / chunks;
  const auto partial = parallel_map(chunks, threads, [&](std::size_t c) {
    const std::size_t begin = std::min(el.size(), c * step);
    const std::size_t end = std::min(el.size(), begin + step);
    return count_positive_x(el, begin, end, m, Z);
  });
  return 2 * std::accumulate(partial.begin(), partial.end(), u64{0});
}

std::vector<u64> count_ratios_profile(const SubgroupModM& G, u64 Zmax) {
  const u64 m = G.modulus();
  check_height(m, Zmax, "count_ratios_profile");
  // A positive-x solution appears for every Z >= max(x, |y|).
  std::vector<u64> by_height(Zmax + 1, 0);
  for (u64 w : G.elements()) {
    u64 y = 0;
    for (u64 x = 1; x <= Zmax; ++x) {
      y += w;
      if (y >= m) y -= m;
      const u64 height_y = std::min(y, m - y);
      if (height_y <= Zmax) ++by_height[std::max(x, height_y)];
    }
  }
  std::vector<u64> profile(Zmax, 0);
  u64 running = 0;
  for (u64 Z = 1; Z <= Zmax; ++Z) {
    running += 2 * by_height[Z];
    profile[Z - 1] = running;
  }
  return profile;
}

double lemma7_rhs(double m, double t, double Z, unsigned nu) {
  if (nu == 0) throw ArgumentError("lemma7_rhs: nu must be >= 1");
  const double v = nu;
  return Z * std::pow(t, (2.0 * v + 1.0) / (2.0 * v * (v + 1.0))) * std::pow(m, -1.0 / (2.0 * (v + 1.0))) +
         Z * Z * std::pow(t, 1.0 / v) * std::pow(m, -1.0 / v);
}

RatioCheck collision_vs_ratio_check(const OddPrime& p, u64 N) {
  check_height(p.squared(), N, "collision_vs_ratio_check");
  const u64 w = collision_count(QuotientTable(p, N));
  const u64 r = count_ratios(pth_power_residues(p), N);
  return RatioCheck{w, r, w <= r};
}

}  // namespace fermatq
