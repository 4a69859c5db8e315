#include "fermatq/schemas.hpp"

#include <cmath>

namespace fermatq::schema {

namespace {

Cell opt(std::optional<u64> v) { return v ? Cell{*v} : Cell{}; }

}  // namespace

Report quotient_report() { return Report({"p", "u", "q"}); }

void add_quotient_row(Report& r, u64 p, u64 u, QuotientValue q) {
  r.add_row({p, u, q.defined() ? Cell{u64{q.value()}} : Cell{}});
}

Report image_report(bool detail) {
  if (!detail) return Report({"p", "N", "image"});
  return Report({"p", "N", "image", "cauchy_bound", "collisions", "log_exponent", "scaled_image"});
}

void add_image_row(Report& r, const QuotientTable& table, bool detail) {
  const u64 p = table.prime().value();
  const u64 N = table.size();
  const ResidueHistogram h = value_histogram(table);
  const u64 image = h.nonzero_cells();
  if (!detail) {
    r.add_row({p, N, image});
    return;
  }
  const double logN = std::log(static_cast<double>(N));
  const double image_scale = N > 1 ? static_cast<double>(N) * static_cast<double>(N) /
                                        (static_cast<double>(p) * logN * logN)
                                  : 0.0;
  r.add_row({p, N, image, cauchy_lower_bound(h).to_double(), h.sum_of_squares(),
             std::log(static_cast<double>(image)) / std::log(static_cast<double>(p)),
             image_scale > 0 ? static_cast<double>(image) / image_scale : Cell{}});
}

Report sum_report() { return Report({"p", "a", "N", "re", "im", "abs", "rhs_eq1_nu2"}); }

void add_sum_row(Report& r, u64 p, u64 a, u64 N, Complex value) {
  r.add_row({p, a, N, value.real(), value.imag(), std::abs(value), hb_bound_rhs(p, N, 2)});
}

Report sieve_report_table() {
  return Report({"R", "K", "A", "lhs", "rhs_bz", "rhs_zhao", "ratio_bz", "ratio_zhao"});
}

void add_sieve_row(Report& r, const SieveReport& s) {
  r.add_row({s.R, s.K, s.A, s.lhs, s.rhs_bz, s.rhs_zhao, s.ratio_bz, s.ratio_zhao});
}

Report theorem1_report(const std::vector<double>& kappas) {
  std::vector<std::string> cols{"P", "nu", "N", "lhs", "rhs_envelope", "trivial_bound",
                                "ratio", "prime_count", "wall_seconds"};
  for (double k : kappas) cols.push_back("exceptional_kappa=" + format_double(k));
  return Report(std::move(cols));
}

void add_theorem1_row(Report& r, const Theorem1Report& t) {
  std::vector<Cell> row{t.P,     u64{t.nu},     t.N,           t.lhs,       t.rhs_envelope,
                        t.trivial_bound, t.ratio, t.prime_count, t.wall_seconds};
  for (const auto& [kappa, count] : t.exceptional) {
    (void)kappa;
    row.emplace_back(count);
  }
  r.add_row(std::move(row));
}

Report theorem1_detail_report() { return Report({"p", "N_p", "a_star", "max_abs", "normalized"}); }

void add_theorem1_detail_rows(Report& r, const Theorem1Report& t) {
  for (const PrimeMaxSum& row : t.per_prime) {
    r.add_row({row.p, row.N_p, row.a_star, row.max_abs, row.max_abs / static_cast<double>(row.N_p)});
  }
}

Report rho_report() { return Report({"M", "b", "nu", "k", "re", "im", "abs", "factorizations"}); }

void add_rho_row(Report& r, u64 M, u64 b, unsigned nu, u64 k, Complex value, u64 factorizations) {
  r.add_row({M, b, u64{nu}, k, value.real(), value.imag(), std::abs(value), factorizations});
}

Report ratios_report() {
  return Report({"m", "t", "Z", "nu", "count", "lemma7_rhs", "ratio", "t_over_sqrt_m"});
}

void add_ratios_row(Report& r, u64 m, u64 t, u64 Z, unsigned nu, u64 count) {
  const double rhs = lemma7_rhs(static_cast<double>(m), static_cast<double>(t), static_cast<double>(Z), nu);
  r.add_row({m, t, Z, u64{nu}, count, rhs, rhs > 0 ? static_cast<double>(count) / rhs : Cell{},
             static_cast<double>(t) / std::sqrt(static_cast<double>(m))});
}

Report scan_report() { return Report({"p", "n_min", "exponent", "verified"}); }

void add_scan_row(Report& r, const ScanRow& row) {
  r.add_row({row.p, opt(row.n_min), row.n_min ? Cell{row.exponent} : Cell{}, u64{row.verified ? 1u : 0u}});
}

Report nonres_report() { return Report({"p", "d", "n_min", "q", "verified"}); }

void add_nonres_row(Report& r, u64 p, u64 d, std::optional<u64> n_min, std::optional<u64> q, bool verified) {
  r.add_row({p, d, opt(n_min), opt(q), u64{verified ? 1u : 0u}});
}

Report doublesum_report() {
  return Report({"p", "order_of_eta", "card_A", "card_B", "abs_sum", "lemma3_envelope", "ratio"});
}

void add_doublesum_row(Report& r, const DoubleSumReport& d) {
  r.add_row({d.p, d.order_of_eta, d.card_a, d.card_b, d.abs_sum, d.lemma3_envelope, d.ratio});
}

}  // namespace fermatq::schema
