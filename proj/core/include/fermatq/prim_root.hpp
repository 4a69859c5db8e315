#pragma once

/**
 * @file prim_root.hpp
 * @brief Primitive roots and d-th power nonresidues among Fermat quotients,
 * the character-sum indicator of primitive roots, and double character sums
 * over sets and over sumsets of quotient values.
 */

#include <memory>
#include <optional>
#include <vector>

#include "fermatq/arith.hpp"
#include "fermatq/char_sums.hpp"

namespace fermatq {

struct IndicatorReport {
  u64 p;
  u64 a;
  int indicator;
  /// Number of characters summed: sum of phi(d) over squarefree d | p - 1.
  u64 terms;
  /// The raw complex value before rounding.
  Complex value;
};

/// phi(p-1)/(p-1) sum_{d | p-1} mu(d)/phi(d) sum_{ord eta = d} eta(a).
/// Throws InternalError if the value is not within 1e-6 of 0 or 1.
IndicatorReport primroot_indicator(const std::shared_ptr<const DiscreteLogTable>& logs, u64 a);
IndicatorReport primroot_indicator(const OddPrime& p, u64 a);

/// Least n <= cap, p not | n, with q_p(n) a primitive root mod p.
std::optional<u64> smallest_primroot_quotient(const OddPrime& p, u64 cap);

/// Least n <= cap with q_p(n) not a d-th power mod p.
/// Throws ArgumentError unless d >= 2 and d | p - 1.
std::optional<u64> smallest_dth_nonresidue_quotient(const OddPrime& p, u64 d, u64 cap);

/// min over nu in {1, 2, 3} of
/// |A|^(1-1/2nu) |B| p^(1/4nu) + |A|^(1-1/2nu) |B|^(1/2) p^(1/2nu).
double lemma3_envelope(u64 p, u64 card_a, u64 card_b);

struct DoubleSumReport {
  u64 p;
  u64 order_of_eta;
  u64 card_a;
  u64 card_b;
  Complex sum;
  double abs_sum;
  double lemma3_envelope;
  /// abs_sum / (card_a * card_b).
  double ratio;
};

/// sum_{a in A} sum_{b in B} eta(a + b). Throws ArgumentError for trivial
/// eta or elements outside [0, p - 1].
DoubleSumReport double_char_sum(const CharacterModP& eta, const std::vector<u64>& A,
                                const std::vector<u64>& B);

struct SumsetExperiment {
  /// First n in [1, U] (resp. [1, V]) attaining each quotient value.
  std::vector<u64> u_set;
  std::vector<u64> v_set;
  DoubleSumReport report;
};

/// Double sum of eta(q_p(u) + q_p(v)) over sets realising I_p(U) and I_p(V).
SumsetExperiment quotient_sumset_experiment(const CharacterModP& eta, u64 U, u64 V);

struct PrimitiveSumCount {
  u64 direct;
  /// The same count expanded through the character indicator.
  double via_characters;
};

/// Number of (u, v) in the first-occurrence sets with q_p(u) + q_p(v) a
/// primitive root. Restricted to p <= 101.
PrimitiveSumCount sumset_primitive_count(const OddPrime& p, u64 U, u64 V);

struct ScanRow {
  u64 p;
  std::optional<u64> n_min;
  double exponent;  // log n_min / log p, 0 when not found
  bool verified;
};

/// For every prime p in [p_min, p_max], the least n <= p^2 with q_p(n) a
/// primitive root, independently re-verified. Rows ascend by p.
std::vector<ScanRow> theorem4_exponent_scan(u64 p_min, u64 p_max, unsigned threads = 1);

}  // namespace fermatq
