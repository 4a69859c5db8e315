// fermatq: command-line front end for the experiment library.
//
// Reports go to standard output or, with --out, to a file written atomically.
// Diagnostics and run metadata go to standard error.
// Exit codes: 0 success, 1 internal failure, 2 bad arguments, 3 budget or cap refusal.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fermatq/arith.hpp"
#include "fermatq/char_sums.hpp"
#include "fermatq/config.hpp"
#include "fermatq/errors.hpp"
#include "fermatq/prim_root.hpp"
#include "fermatq/quotient.hpp"
#include "fermatq/report.hpp"
#include "fermatq/schemas.hpp"
#include "fermatq/selftest.hpp"
#include "fermatq/sieve_lab.hpp"
#include "fermatq/subgroup.hpp"

namespace {

using namespace fermatq;

enum Exit : int { kOk = 0, kInternal = 1, kArgument = 2, kBudget = 3 };

struct GlobalFlags {
  std::optional<unsigned> threads;
  std::optional<u64> budget;
  std::optional<u64> memcap;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<u64> seed;
};

// What a subcommand produces: a report, or raw bytes (table dumps).
struct Output {
  std::optional<Report> report;
  std::string bytes;
  int status = kOk;
};

void emit(const Output& out, const RunConfig& config) {
  const std::string text = out.report ? out.report->render(config.format) : out.bytes;
  if (config.output_path.empty()) {
    std::cout.write(text.data(), static_cast<std::streamsize>(text.size()));
    std::cout.flush();
  } else {
    write_file_atomically(config.output_path, text);
  }
}

void require(bool condition, const std::string& message) {
  if (!condition) throw ArgumentError(message);
}

std::map<u64, u64> read_n_table(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "--N-table: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const CsvTable csv = parse_csv(buffer.str());
  require(csv.header.size() == 2, "--N-table: expected two columns p,N_p");
  std::map<u64, u64> table;
  for (const auto& row : csv.rows) {
    require(row.size() == 2, "--N-table: malformed row");
    try {
      table[std::stoull(row[0])] = std::stoull(row[1]);
    } catch (const std::exception&) {
      throw ArgumentError("--N-table: non-numeric entry '" + row[0] + "," + row[1] + "'");
    }
  }
  return table;
}

// Coefficients with real and imaginary parts uniform in [-1, 1), built from
// raw engine output so the values do not depend on the standard library.
TrigPolynomial random_polynomial(u64 K, u64 seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; };
  std::vector<Complex> c(K);
  for (auto& z : c) {
    const double re = unit();
    z = Complex(re, unit());
  }
  return TrigPolynomial(std::move(c));
}

bool is_dth_power(u64 q, u64 d, u64 p) { return q != 0 && mod_pow(q, (p - 1) / d, p) == 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fermat quotient experiments", "fermatq"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", tool_version());

  GlobalFlags g;
  app.add_option("--threads", g.threads, "Worker threads (env FERMATQ_THREADS)");
  app.add_option("--budget", g.budget, "Operation budget (env FERMATQ_BUDGET)");
  app.add_option("--memcap", g.memcap, "Memory cap in bytes (env FERMATQ_MEMCAP)");
  app.add_option("--out", g.out, "Write the report to this file instead of stdout");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "Seed for randomized inputs and self-test suites");

  RunConfig config;
  std::function<Output()> action;
  std::string command;

  auto bind = [&](CLI::App* sub, std::function<Output()> fn) {
    sub->callback([&action, &command, sub, fn = std::move(fn)] {
      command = sub->get_name();
      action = fn;
    });
  };

  // quotient
  u64 q_p = 0;
  std::vector<u64> q_u;
  {
    auto* sub = app.add_subcommand("quotient", "q_p(u) for one or more u");
    sub->add_option("--p", q_p, "Odd prime")->required();
    sub->add_option("--u", q_u, "Arguments (repeatable or comma separated)")->required()->delimiter(',');
    bind(sub, [&] {
      const OddPrime p(q_p);
      Report r = schema::quotient_report();
      for (u64 u : q_u) schema::add_quotient_row(r, q_p, u, fermat_quotient(p, u));
      return Output{std::move(r), {}};
    });
  }

  // table
  u64 t_p = 0, t_n = 0;
  {
    auto* sub = app.add_subcommand("table", "Binary dump of q_p(1..N)");
    sub->add_option("--p", t_p, "Odd prime")->required();
    sub->add_option("--n", t_n, "Table length N")->required();
    bind(sub, [&] {
      const QuotientTable table(OddPrime(t_p), t_n, config.table_cap());
      std::ostringstream bytes(std::ios::binary);
      table.write_binary(bytes);
      return Output{std::nullopt, bytes.str()};
    });
  }

  // image
  u64 i_p = 0, i_n = 0;
  std::string i_table;
  bool i_detail = false;
  {
    auto* sub = app.add_subcommand("image", "Image size I_p(N) and collision statistics");
    auto* p_opt = sub->add_option("--p", i_p, "Odd prime");
    auto* n_opt = sub->add_option("--n", i_n, "Prefix length N");
    auto* t_opt = sub->add_option("--table", i_table, "Read q_p(1..N) from a binary dump");
    t_opt->excludes(p_opt)->excludes(n_opt);
    sub->add_flag("--detail", i_detail, "Add Cauchy bound, collisions and exponent columns");
    bind(sub, [&] {
      Report r = schema::image_report(i_detail);
      if (!i_table.empty()) {
        std::ifstream in(i_table, std::ios::binary);
        require(static_cast<bool>(in), "--table: cannot open " + i_table);
        schema::add_image_row(r, QuotientTable::read_binary(in), i_detail);
      } else {
        require(i_p != 0 && i_n != 0, "image requires --p and --n, or --table");
        schema::add_image_row(r, QuotientTable(OddPrime(i_p), i_n, config.table_cap()), i_detail);
      }
      return Output{std::move(r), {}};
    });
  }

  // expsum
  u64 e_p = 0, e_a = 0, e_n = 0;
  {
    auto* sub = app.add_subcommand("expsum", "S_p(a; N) by direct summation");
    sub->add_option("--p", e_p, "Odd prime")->required();
    sub->add_option("--a", e_a, "Frequency a")->required();
    sub->add_option("--n", e_n, "Length N")->required();
    bind(sub, [&] {
      const OddPrime p(e_p);
      Report r = schema::sum_report();
      schema::add_sum_row(r, e_p, e_a, e_n, exp_sum_direct(p, e_a, e_n));
      return Output{std::move(r), {}};
    });
  }

  // maxsum
  u64 m_p = 0, m_n = 0;
  {
    auto* sub = app.add_subcommand("maxsum", "max over a != 0 of |S_p(a; N)|");
    sub->add_option("--p", m_p, "Odd prime")->required();
    sub->add_option("--n", m_n, "Length N")->required();
    bind(sub, [&] {
      const OddPrime p(m_p);
      const MaxExpSum m = max_exp_sum(prime_value_histogram(p, m_n, config.table_cap()));
      Report r = schema::sum_report();
      schema::add_sum_row(r, m_p, m.a_star, m_n, m.sum);
      return Output{std::move(r), {}};
    });
  }

  // avg
  std::vector<u64> a_P;
  u64 a_pmin = 0, a_pmax = 0;
  unsigned a_nu = 0;
  std::string a_rule, a_table;
  std::vector<double> a_kappa;
  bool a_timing = false, a_detail = false;
  {
    auto* sub = app.add_subcommand("avg", "Average of max_a |S_p(a; N_p)|^(2 nu) over p in (P, 2P]");
    auto* P_opt = sub->add_option("--P", a_P, "Dyadic scale P (repeatable)")->delimiter(',');
    auto* lo = sub->add_option("--pmin", a_pmin, "Smallest P of a doubling sweep");
    auto* hi = sub->add_option("--pmax", a_pmax, "Sweep while 2P <= pmax");
    lo->needs(hi);
    hi->needs(lo);
    P_opt->excludes(lo)->excludes(hi);
    sub->add_option("--nu", a_nu, "Moment parameter nu >= 1")->required();
    auto* rule = sub->add_option("--N-rule", a_rule, "N_p rule: constant, P^x or P^a/b");
    auto* table = sub->add_option("--N-table", a_table, "CSV file with columns p,N_p");
    rule->excludes(table);
    sub->add_option("--kappa", a_kappa, "Exceptional-set thresholds (repeatable)")->delimiter(',');
    sub->add_flag("--timing", a_timing, "Record wall_seconds (output is then not reproducible)");
    sub->add_flag("--detail", a_detail, "Emit one row per prime instead of one per P");
    bind(sub, [&] {
      require(a_nu >= 1, "--nu must be >= 1");
      require(!a_rule.empty() || !a_table.empty(), "avg requires --N-rule or --N-table");
      std::vector<u64> scales = a_P;
      if (scales.empty()) {
        require(a_pmin >= 3 && a_pmax >= 2 * a_pmin, "avg requires --P, or --pmin >= 3 with --pmax >= 2 pmin");
        for (u64 P = a_pmin; 2 * P <= a_pmax; P *= 2) scales.push_back(P);
      }
      const NSelector selector = a_table.empty() ? NSelector::parse(a_rule) : NSelector::table(read_n_table(a_table));
      AverageOptions opts;
      opts.threads = config.threads;
      opts.budget_ops = config.budget_ops;
      opts.kappas = a_kappa;
      opts.timing = a_timing;
      Report r = a_detail ? schema::theorem1_detail_report() : schema::theorem1_report(a_kappa);
      for (u64 P : scales) {
        const Theorem1Report t = theorem1_average(P, a_nu, selector, opts);
        if (a_detail) {
          schema::add_theorem1_detail_rows(r, t);
        } else {
          schema::add_theorem1_row(r, t);
        }
      }
      return Output{std::move(r), {}};
    });
  }

  // sieve
  u64 s_R = 0, s_K = 0, s_M = 0, s_b = 1;
  unsigned s_nu = 2;
  std::string s_poly = "ones";
  {
    auto* sub = app.add_subcommand("sieve", "Large sieve sum over square moduli");
    sub->add_option("--R", s_R, "Moduli r^2 with r <= R")->required();
    sub->add_option("--K", s_K, "Polynomial degree (ones, random)");
    sub->add_option("--poly", s_poly, "Coefficients")->check(CLI::IsMember({"ones", "random", "rho"}));
    sub->add_option("--M", s_M, "rho: factor bound M");
    sub->add_option("--b", s_b, "rho: frequency b");
    sub->add_option("--nu", s_nu, "rho: number of factors");
    bind(sub, [&] {
      std::optional<TrigPolynomial> poly;
      if (s_poly == "rho") {
        require(s_M >= 1 && s_nu >= 1, "--poly rho requires --M >= 1 and --nu >= 1");
        poly.emplace(rho_polynomial(s_M, s_b, s_nu, config.table_cap()));
      } else {
        require(s_K >= 1, "--K must be >= 1");
        poly.emplace(s_poly == "ones" ? TrigPolynomial(std::vector<Complex>(s_K, Complex(1.0, 0.0)))
                                      : random_polynomial(s_K, config.seed));
      }
      require(s_R >= 1, "--R must be >= 1");
      Report r = schema::sieve_report_table();
      schema::add_sieve_row(r, sieve_report(*poly, s_R, config.budget_ops));
      return Output{std::move(r), {}};
    });
  }

  // rho
  u64 r_M = 0, r_b = 1;
  unsigned r_nu = 2;
  std::vector<u64> r_k;
  {
    auto* sub = app.add_subcommand("rho", "Coefficients rho_{b,nu}(k)");
    sub->add_option("--M", r_M, "Factor bound M")->required();
    sub->add_option("--b", r_b, "Frequency b");
    sub->add_option("--nu", r_nu, "Number of factors");
    sub->add_option("--k", r_k, "Indices (default: every k <= M^nu with a factorization)")->delimiter(',');
    bind(sub, [&] {
      require(r_M >= 1 && r_nu >= 1, "--M and --nu must be >= 1");
      Report r = schema::rho_report();
      if (!r_k.empty()) {
        for (u64 k : r_k) {
          schema::add_rho_row(r, r_M, r_b, r_nu, k, rho_coefficient(r_M, r_b, r_nu, k),
                              ordered_factorization_count(r_M, r_nu, k));
        }
      } else {
        const TrigPolynomial poly = rho_polynomial(r_M, r_b, r_nu, config.table_cap());
        const TrigPolynomial counts = rho_polynomial(r_M, 0, r_nu, config.table_cap());
        for (u64 k = 1; k <= poly.degree(); ++k) {
          const auto n = static_cast<u64>(std::llround(counts.alpha(k).real()));
          if (n != 0) schema::add_rho_row(r, r_M, r_b, r_nu, k, poly.alpha(k), n);
        }
      }
      return Output{std::move(r), {}};
    });
  }

  // ratios
  u64 z_p = 0, z_m = 0;
  std::vector<u64> z_gens, z_Z;
  unsigned z_nu = 2;
  {
    auto* sub = app.add_subcommand("ratios", "N(m, G, Z) for G_p or a generated subgroup");
    auto* p_opt = sub->add_option("--p", z_p, "Use m = p^2 and G = G_p");
    auto* m_opt = sub->add_option("--m", z_m, "Modulus m (with --gens)");
    auto* gens = sub->add_option("--gens", z_gens, "Generators of G mod m")->delimiter(',');
    p_opt->excludes(m_opt)->excludes(gens);
    m_opt->needs(gens);
    sub->add_option("--Z", z_Z, "Heights Z (repeatable)")->required()->delimiter(',');
    sub->add_option("--nu", z_nu, "Exponent nu for the comparison envelope");
    bind(sub, [&] {
      require(z_p != 0 || z_m != 0, "ratios requires --p or --m with --gens");
      require(z_nu >= 1, "--nu must be >= 1");
      const SubgroupModM G = z_p != 0 ? pth_power_residues(OddPrime(z_p)) : SubgroupModM::generated_by(z_m, z_gens);
      Report r = schema::ratios_report();
      for (u64 Z : z_Z) schema::add_ratios_row(r, G.modulus(), G.order(), Z, z_nu, count_ratios(G, Z, config.threads));
      return Output{std::move(r), {}};
    });
  }

  // primroot
  u64 pr_p = 0;
  std::optional<u64> pr_cap;
  {
    auto* sub = app.add_subcommand("primroot", "Least n with q_p(n) a primitive root mod p");
    sub->add_option("--p", pr_p, "Odd prime")->required();
    sub->add_option("--cap", pr_cap, "Search bound (default p^2)");
    bind(sub, [&] {
      const OddPrime p(pr_p);
      const u64 cap = pr_cap.value_or(p.squared());
      require(cap >= 1, "--cap must be >= 1");
      ScanRow row{pr_p, smallest_primroot_quotient(p, std::min(cap, config.table_cap())), 0.0, false};
      if (row.n_min) {
        const QuotientValue q = fermat_quotient(p, *row.n_min);
        row.verified = q.defined() && q.value() != 0 && multiplicative_order(q.value(), pr_p) == pr_p - 1;
        row.exponent = std::log(static_cast<double>(*row.n_min)) / std::log(static_cast<double>(pr_p));
      }
      Report r = schema::scan_report();
      schema::add_scan_row(r, row);
      return Output{std::move(r), {}};
    });
  }

  // nonres
  u64 nr_p = 0, nr_d = 0;
  std::optional<u64> nr_cap;
  {
    auto* sub = app.add_subcommand("nonres", "Least n with q_p(n) not a d-th power mod p");
    sub->add_option("--p", nr_p, "Odd prime")->required();
    sub->add_option("--d", nr_d, "Divisor d of p - 1, d >= 2")->required();
    sub->add_option("--cap", nr_cap, "Search bound (default p^2)");
    bind(sub, [&] {
      const OddPrime p(nr_p);
      const u64 cap = std::min(nr_cap.value_or(p.squared()), config.table_cap());
      const std::optional<u64> n = smallest_dth_nonresidue_quotient(p, nr_d, cap);
      std::optional<u64> q;
      bool verified = false;
      if (n) {
        const QuotientValue v = fermat_quotient(p, *n);
        if (v.defined()) {
          q = v.value();
          verified = !is_dth_power(v.value(), nr_d, nr_p);
        }
      }
      Report r = schema::nonres_report();
      schema::add_nonres_row(r, nr_p, nr_d, n, q, verified);
      return Output{std::move(r), {}};
    });
  }

  // doublesum
  u64 d_p = 0, d_U = 0, d_V = 0;
  std::optional<u64> d_order, d_k;
  std::vector<u64> d_A, d_B;
  {
    auto* sub = app.add_subcommand("doublesum", "Double character sum over A x B or over quotient sets");
    sub->add_option("--p", d_p, "Odd prime")->required();
    auto* order = sub->add_option("--order", d_order, "Use the first character of this exact order");
    auto* k = sub->add_option("--k", d_k, "Character exponent k: eta(g^j) = e_{p-1}(k j)");
    order->excludes(k);
    auto* A = sub->add_option("--A", d_A, "Set A (comma separated)")->delimiter(',');
    auto* B = sub->add_option("--B", d_B, "Set B (comma separated)")->delimiter(',');
    auto* U = sub->add_option("--U", d_U, "A = first occurrences of each q_p(u), u <= U");
    auto* V = sub->add_option("--V", d_V, "B = first occurrences of each q_p(v), v <= V");
    A->needs(B);
    U->needs(V);
    A->excludes(U)->excludes(V);
    B->excludes(U)->excludes(V);
    bind(sub, [&] {
      const OddPrime p(d_p);
      u64 exponent = 0;
      if (d_order) {
        require(*d_order >= 2 && (d_p - 1) % *d_order == 0, "--order must divide p - 1 and be >= 2");
        exponent = CharacterModP::exponents_of_order(p, *d_order).front();
      } else {
        require(d_k.has_value(), "doublesum requires --order or --k");
        exponent = *d_k;
      }
      const CharacterModP eta(p, exponent);
      Report r = schema::doublesum_report();
      if (!d_A.empty()) {
        schema::add_doublesum_row(r, double_char_sum(eta, d_A, d_B));
      } else {
        require(d_U >= 1 && d_V >= 1, "doublesum requires --A/--B or --U/--V");
        schema::add_doublesum_row(r, quotient_sumset_experiment(eta, d_U, d_V).report);
      }
      return Output{std::move(r), {}};
    });
  }

  // scan
  u64 sc_min = 0, sc_max = 0;
  {
    auto* sub = app.add_subcommand("scan", "primroot for every prime in [pmin, pmax]");
    sub->add_option("--pmin", sc_min, "Lower bound")->required();
    sub->add_option("--pmax", sc_max, "Upper bound")->required();
    bind(sub, [&] {
      require(sc_min <= sc_max, "--pmin must not exceed --pmax");
      Report r = schema::scan_report();
      for (const ScanRow& row : theorem4_exponent_scan(sc_min, sc_max, config.threads)) schema::add_scan_row(r, row);
      return Output{std::move(r), {}};
    });
  }

  // selftest
  bool st_fault = false;
  {
    auto* sub = app.add_subcommand("selftest", "Run every module's invariant suite");
    sub->add_flag("--inject-fault", st_fault)->group("");
    bind(sub, [&] {
      SelftestOptions o;
      o.seed = config.seed;
      o.threads = config.threads;
      o.inject_quotient_fault = st_fault;
      const SelftestResult result = run_selftest(o);
      Report r({"module", "checks", "status"});
      for (const SuiteOutcome& s : result.suites) {
        r.add_row({s.module, s.checks, std::string(s.passed ? "pass" : "FAIL")});
        if (!s.passed) std::cerr << "fermatq: selftest: " << s.module << ": " << s.failure << '\n';
      }
      return Output{std::move(r), {}, result.ok() ? kOk : kInternal};
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kArgument;
  }

  try {
    ConfigOverrides flags;
    flags.threads = g.threads;
    flags.budget_ops = g.budget;
    flags.memory_cap_bytes = g.memcap;
    flags.output_path = g.out;
    flags.seed = g.seed;
    if (g.format) flags.format = *g.format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
    config = resolve_config(flags);

    std::cerr << "# fermatq " << tool_version() << " " << command << " seed=" << config.seed
              << " threads=" << config.threads << '\n';
    const Output out = action();
    emit(out, config);
    return out.status;
  } catch (const ArgumentError& e) {
    std::cerr << "fermatq: error: " << e.what() << '\n';
    return kArgument;
  } catch (const BudgetExceeded& e) {
    std::cerr << "fermatq: refused: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "fermatq: internal error: " << e.what() << '\n';
    return kInternal;
  }
}
