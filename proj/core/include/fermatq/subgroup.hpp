#pragma once

/**
 * @file subgroup.hpp
 * @brief Multiplicative subgroups of (Z/mZ)^*, the ratio counter N(m, G, Z)
 * and its comparison with collisions of Fermat quotients.
 *
 * N(m, G, Z) counts triples (w, x, y) with w in G, 0 < |x|, |y| <= Z and
 * w x = y (mod m). Signed values are represented by residues in
 * [1, Z] U [m - Z, m - 1], which requires Z < m / 2.
 */

#include <memory>
#include <unordered_set>
#include <vector>

#include "fermatq/arith.hpp"

namespace fermatq {

class SubgroupModM;

/// Default cap on p for G_p (elements are enumerated explicitly).
inline constexpr u64 kDefaultSubgroupPrimeCap = u64{1} << 24;

/// G_p = { w mod p^2 : w^(p-1) = 1 }, the p-th power residues; order p - 1.
SubgroupModM pth_power_residues(const OddPrime& p, u64 cap = kDefaultSubgroupPrimeCap);

class SubgroupModM {
 public:
  /// Verifies coprimality, 1 in the set, closure under products and
  /// inverses. Throws ArgumentError otherwise.
  static SubgroupModM from_elements(u64 m, std::vector<u64> elements);
  /// The subgroup generated by the given units.
  static SubgroupModM generated_by(u64 m, const std::vector<u64>& generators);

  u64 modulus() const { return m_; }
  u64 order() const { return elements_.size(); }
  /// Sorted ascending.
  const std::vector<u64>& elements() const { return elements_; }
  bool contains(u64 x) const;

 private:
  friend SubgroupModM pth_power_residues(const OddPrime& p, u64 cap);
  SubgroupModM(u64 m, std::vector<u64> elements);

  u64 m_;
  std::vector<u64> elements_;
  // Bitset for m <= 2^24, hash set above.
  std::vector<bool> bits_;
  std::unordered_set<u64> hashed_;
};

/// N(m, G, Z). Cost O(#G * Z). Throws ArgumentError unless 1 <= Z and 2Z < m.
u64 count_ratios(const SubgroupModM& G, u64 Z, unsigned threads = 1);

/// N(m, G, Z) for every Z = 1..Zmax in one pass; element Z-1 holds N(m, G, Z).
std::vector<u64> count_ratios_profile(const SubgroupModM& G, u64 Zmax);

/// Z t^((2nu+1)/(2nu(nu+1))) m^(-1/(2(nu+1))) + Z^2 t^(1/nu) m^(-1/nu).
double lemma7_rhs(double m, double t, double Z, unsigned nu);

struct RatioCheck {
  u64 w_count;
  u64 ratio_count;
  bool ok;
};

/// #W_p(N) against N(p^2, G_p, N). Requires 2N < p^2.
RatioCheck collision_vs_ratio_check(const OddPrime& p, u64 N);

}  // namespace fermatq
