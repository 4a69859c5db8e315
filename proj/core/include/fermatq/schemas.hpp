#pragma once

/**
 * @file schemas.hpp
 * @brief Fixed-column report layouts for every experiment. Column order is
 * part of the output contract.
 */

#include <optional>
#include <vector>

#include "fermatq/char_sums.hpp"
#include "fermatq/prim_root.hpp"
#include "fermatq/report.hpp"
#include "fermatq/sieve_lab.hpp"
#include "fermatq/subgroup.hpp"

namespace fermatq::schema {

/// p,u,q  (q empty when undefined)
Report quotient_report();
void add_quotient_row(Report& r, u64 p, u64 u, QuotientValue q);

/// p,N,image  or, with detail,
/// p,N,image,cauchy_bound,collisions,log_exponent,scaled_image
Report image_report(bool detail);
void add_image_row(Report& r, const QuotientTable& table, bool detail);

/// p,a,N,re,im,abs,rhs_eq1_nu2
Report sum_report();
void add_sum_row(Report& r, u64 p, u64 a, u64 N, Complex value);

/// R,K,A,lhs,rhs_bz,rhs_zhao,ratio_bz,ratio_zhao
Report sieve_report_table();
void add_sieve_row(Report& r, const SieveReport& s);

/// P,nu,N,lhs,rhs_envelope,trivial_bound,ratio,prime_count,wall_seconds
/// followed by one exceptional_kappa=<k> column per requested kappa.
Report theorem1_report(const std::vector<double>& kappas);
void add_theorem1_row(Report& r, const Theorem1Report& t);

/// p,N_p,a_star,max_abs,normalized
Report theorem1_detail_report();
void add_theorem1_detail_rows(Report& r, const Theorem1Report& t);

/// M,b,nu,k,re,im,abs,factorizations
Report rho_report();
void add_rho_row(Report& r, u64 M, u64 b, unsigned nu, u64 k, Complex value, u64 factorizations);

/// m,t,Z,nu,count,lemma7_rhs,ratio,t_over_sqrt_m
Report ratios_report();
void add_ratios_row(Report& r, u64 m, u64 t, u64 Z, unsigned nu, u64 count);

/// p,n_min,exponent,verified
Report scan_report();
void add_scan_row(Report& r, const ScanRow& row);

/// p,d,n_min,q,verified
Report nonres_report();
void add_nonres_row(Report& r, u64 p, u64 d, std::optional<u64> n_min, std::optional<u64> q, bool verified);

/// p,order_of_eta,card_A,card_B,abs_sum,lemma3_envelope,ratio
Report doublesum_report();
void add_doublesum_row(Report& r, const DoubleSumReport& d);

}  // namespace fermatq::schema
