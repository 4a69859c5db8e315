#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fermatq/config.hpp"
#include "fermatq/errors.hpp"
#include "fermatq/parallel.hpp"
#include "fermatq/schemas.hpp"
#include "fermatq/selftest.hpp"

using namespace fermatq;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "fermatq_report_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One populated report per schema.
std::map<std::string, Report> sample_reports() {
  std::map<std::string, Report> out;
  const OddPrime p7(7);

  Report q = schema::quotient_report();
  schema::add_quotient_row(q, 5, 2, fermat_quotient(OddPrime(5), 2));
  schema::add_quotient_row(q, 5, 10, fermat_quotient(OddPrime(5), 10));
  out.emplace("quotient", std::move(q));

  Report img = schema::image_report(true);
  schema::add_image_row(img, QuotientTable(p7, 30), true);
  schema::add_image_row(img, QuotientTable(p7, 1), true);
  out.emplace("image", std::move(img));

  Report sum = schema::sum_report();
  schema::add_sum_row(sum, 7, 2, 30, exp_sum_direct(p7, 2, 30));
  out.emplace("sum", std::move(sum));

  Report sieve = schema::sieve_report_table();
  schema::add_sieve_row(sieve, sieve_report(TrigPolynomial(std::vector<Complex>(5, Complex(1.0, 0.5))), 3));
  out.emplace("sieve", std::move(sieve));

  AverageOptions o;
  o.kappas = {0.1, 0.2};
  const Theorem1Report t = theorem1_average(32, 2, NSelector::constant(6), o);
  Report avg = schema::theorem1_report(o.kappas);
  schema::add_theorem1_row(avg, t);
  out.emplace("theorem1", std::move(avg));
  Report detail = schema::theorem1_detail_report();
  schema::add_theorem1_detail_rows(detail, t);
  out.emplace("theorem1_detail", std::move(detail));

  Report rho = schema::rho_report();
  schema::add_rho_row(rho, 4, 1, 2, 4, rho_coefficient(4, 1, 2, 4), ordered_factorization_count(4, 2, 4));
  out.emplace("rho", std::move(rho));

  Report ratios = schema::ratios_report();
  schema::add_ratios_row(ratios, 49, 6, 10, 2, count_ratios(pth_power_residues(p7), 10));
  out.emplace("ratios", std::move(ratios));

  Report scan = schema::scan_report();
  for (const ScanRow& r : theorem4_exponent_scan(3, 50)) schema::add_scan_row(scan, r);
  out.emplace("scan", std::move(scan));

  Report nonres = schema::nonres_report();
  schema::add_nonres_row(nonres, 7, 6, 2, 2, true);
  schema::add_nonres_row(nonres, 7, 2, std::nullopt, std::nullopt, false);
  out.emplace("nonres", std::move(nonres));

  Report ds = schema::doublesum_report();
  schema::add_doublesum_row(ds, double_char_sum(CharacterModP(p7, 3), {1, 2}, {1, 3}));
  out.emplace("doublesum", std::move(ds));
  return out;
}

bool parses_as_number(const std::string& s) {
  if (s.empty() || s == "nan" || s == "inf" || s == "-inf") return true;
  std::size_t used = 0;
  try {
    (void)std::stod(s, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == s.size();
}

}  // namespace

TEST(Report, CsvRendering) {
  Report r({"a", "b", "c", "d", "e"});
  r.add_row({u64{5}, std::int64_t{-3}, 0.1, std::string("x"), Cell{}});
  EXPECT_EQ(r.to_csv(), "a,b,c,d,e\n5,-3,0.1,x,\n");
  EXPECT_THROW(r.add_row({u64{1}}), ArgumentError);
  EXPECT_EQ(Report({"only"}).to_csv(), "only\n");
}

TEST(Report, DoubleFormatting) {
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(std::log(9.0) / std::log(7.0)), "1.12915006811");
  EXPECT_EQ(format_double(1e-20), "1e-20");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Report, JsonMirrorsCsvColumns) {
  for (const auto& [name, report] : sample_reports()) {
    const auto json = nlohmann::ordered_json::parse(report.to_json());
    ASSERT_TRUE(json.is_array()) << name;
    ASSERT_EQ(json.size(), report.rows().size()) << name;
    const CsvTable csv = parse_csv(report.to_csv());
    for (std::size_t r = 0; r < json.size(); ++r) {
      const auto& obj = json[r];
      ASSERT_TRUE(obj.is_object());
      std::vector<std::string> keys;
      for (const auto& [k, v] : obj.items()) {
        ASSERT_FALSE(v.is_object() || v.is_array()) << name << "." << k;
        keys.push_back(k);
      }
      ASSERT_EQ(keys, report.columns()) << name;
      for (std::size_t c = 0; c < keys.size(); ++c) {
        const auto& v = obj[keys[c]];
        const std::string& text = csv.rows[r][c];
        if (v.is_null()) {
          EXPECT_TRUE(text.empty());
        } else if (v.is_number_float()) {
          EXPECT_EQ(format_double(v.get<double>()), text) << name << "." << keys[c];
        } else if (v.is_number()) {
          EXPECT_EQ(v.dump(), text);
        }
      }
    }
  }
}

TEST(Report, EveryCsvRoundTripsIntoItsSchema) {
  for (const auto& [name, report] : sample_reports()) {
    const std::string text = report.to_csv();
    const CsvTable t = parse_csv(text);
    EXPECT_EQ(t.header, report.columns()) << name;
    ASSERT_EQ(t.rows.size(), report.rows().size()) << name;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      for (std::size_t c = 0; c < t.header.size(); ++c) {
        EXPECT_EQ(t.rows[r][c], format_cell(report.rows()[r][c]));
        EXPECT_TRUE(parses_as_number(t.rows[r][c])) << name << " " << t.header[c] << "=" << t.rows[r][c];
      }
    }
  }
}

TEST(Report, SchemaColumnOrder) {
  EXPECT_EQ(schema::quotient_report().columns(), (std::vector<std::string>{"p", "u", "q"}));
  EXPECT_EQ(schema::image_report(false).columns(), (std::vector<std::string>{"p", "N", "image"}));
  EXPECT_EQ(schema::sum_report().columns(),
            (std::vector<std::string>{"p", "a", "N", "re", "im", "abs", "rhs_eq1_nu2"}));
  EXPECT_EQ(schema::sieve_report_table().columns(),
            (std::vector<std::string>{"R", "K", "A", "lhs", "rhs_bz", "rhs_zhao", "ratio_bz", "ratio_zhao"}));
  EXPECT_EQ(schema::theorem1_report({}).columns(),
            (std::vector<std::string>{"P", "nu", "N", "lhs", "rhs_envelope", "trivial_bound", "ratio",
                                      "prime_count", "wall_seconds"}));
  EXPECT_EQ(schema::theorem1_report({0.25}).columns().back(), "exceptional_kappa=0.25");
  EXPECT_EQ(schema::ratios_report().columns(),
            (std::vector<std::string>{"m", "t", "Z", "nu", "count", "lemma7_rhs", "ratio", "t_over_sqrt_m"}));
  EXPECT_EQ(schema::scan_report().columns(), (std::vector<std::string>{"p", "n_min", "exponent", "verified"}));
}

TEST(Report, ParseCsvRejectsRaggedRows) {
  EXPECT_THROW(parse_csv("a,b\n1\n"), ArgumentError);
  const CsvTable t = parse_csv("a,b\r\n1,2\r\n\n");
  EXPECT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "2");
}

TEST(AtomicWrite, ReplacesWholeFileAndLeavesNoTemp) {
  const auto dir = scratch_dir();
  const auto path = dir / "out.csv";
  write_file_atomically(path, "first\n");
  EXPECT_EQ(slurp(path), "first\n");
  write_file_atomically(path, "second\n");
  EXPECT_EQ(slurp(path), "second\n");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
  EXPECT_ANY_THROW(write_file_atomically(dir / "missing_dir" / "x.csv", "data"));
  EXPECT_FALSE(std::filesystem::exists(dir / "missing_dir"));
}

TEST(Config, Defaults) {
  const RunConfig c = resolve_config({}, [](const char*) -> const char* { return nullptr; });
  EXPECT_EQ(c.threads, 1u);
  EXPECT_EQ(c.budget_ops, 20'000'000'000ull);
  EXPECT_EQ(c.memory_cap_bytes, u64{1} << 30);
  EXPECT_EQ(c.table_cap(), u64{1} << 28);
  EXPECT_EQ(c.format, OutputFormat::kCsv);
  EXPECT_TRUE(c.output_path.empty());
}

TEST(Config, FlagsOverrideEnvironmentOverrideDefaults) {
  const std::map<std::string, std::string> env{
      {"FERMATQ_THREADS", "4"}, {"FERMATQ_BUDGET", "5000"}, {"FERMATQ_MEMCAP", "4096"}};
  auto lookup = [&](const char* name) -> const char* {
    const auto it = env.find(name);
    return it == env.end() ? nullptr : it->second.c_str();
  };
  const RunConfig from_env = resolve_config({}, lookup);
  EXPECT_EQ(from_env.threads, 4u);
  EXPECT_EQ(from_env.budget_ops, 5000u);
  EXPECT_EQ(from_env.memory_cap_bytes, 4096u);

  ConfigOverrides flags;
  flags.threads = 8;
  flags.budget_ops = 7;
  flags.format = OutputFormat::kJson;
  flags.seed = 42;
  const RunConfig mixed = resolve_config(flags, lookup);
  EXPECT_EQ(mixed.threads, 8u);
  EXPECT_EQ(mixed.budget_ops, 7u);
  EXPECT_EQ(mixed.memory_cap_bytes, 4096u);
  EXPECT_EQ(mixed.format, OutputFormat::kJson);
  EXPECT_EQ(mixed.seed, 42u);
}

TEST(Config, RejectsMalformedValues) {
  for (const char* bad : {"0", "-2", "abc", "3x", ""}) {
    auto lookup = [bad](const char* name) -> const char* {
      return std::string(name) == "FERMATQ_THREADS" ? bad : nullptr;
    };
    EXPECT_THROW(resolve_config({}, lookup), ArgumentError) << bad;
  }
  ConfigOverrides zero;
  zero.threads = 0;
  EXPECT_THROW(resolve_config(zero, [](const char*) -> const char* { return nullptr; }), ArgumentError);
}

TEST(Parallel, ResultsAreIndexedAndErrorsPropagate) {
  for (unsigned threads : {1u, 2u, 8u}) {
    const auto out = parallel_map(1000, threads, [](std::size_t i) { return i * i; });
    ASSERT_EQ(out.size(), 1000u);
    for (std::size_t i = 0; i < out.size(); ++i) ASSERT_EQ(out[i], i * i);
    EXPECT_THROW(parallel_map(100, threads,
                              [](std::size_t i) -> int {
                                if (i == 37) throw std::runtime_error("boom");
                                return 0;
                              }),
                 std::runtime_error);
  }
  EXPECT_TRUE(parallel_map(0, 4, [](std::size_t i) { return i; }).empty());
}

TEST(Parallel, PairwiseSum) {
  std::vector<double> xs(1000);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i + 1);
  EXPECT_EQ(pairwise_sum(xs), 500500.0);
  EXPECT_EQ(pairwise_sum(std::span<const double>{}), 0.0);
  // 1 + 1e-16 * 1e4 is lost by naive left-to-right summation but not pairwise.
  std::vector<double> tiny(10001, 1e-16);
  tiny[0] = 1.0;
  EXPECT_GT(pairwise_sum(tiny), 1.0);
}

TEST(Selftest, PassesAndIsDeterministic) {
  SelftestOptions o;
  o.seed = 42;
  const SelftestResult a = run_selftest(o);
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a.suites.size(), 7u);
  o.threads = 4;
  const SelftestResult b = run_selftest(o);
  for (std::size_t i = 0; i < a.suites.size(); ++i) {
    EXPECT_EQ(a.suites[i].module, b.suites[i].module);
    EXPECT_EQ(a.suites[i].checks, b.suites[i].checks);
  }
  EXPECT_EQ(a.suites.front().module, "core-arith");
  EXPECT_EQ(a.suites.back().module, "experiment-cli");
}

TEST(Selftest, InjectedFaultNamesFermatQuotient) {
  SelftestOptions o;
  o.inject_quotient_fault = true;
  const SelftestResult r = run_selftest(o);
  EXPECT_FALSE(r.ok());
  const SuiteOutcome& last = r.suites.back();
  EXPECT_EQ(last.module, "fermat-quotient");
  EXPECT_FALSE(last.passed);
  EXPECT_NE(last.failure.find("quotient_table"), std::string::npos);
  EXPECT_NE(last.failure.find("p=3"), std::string::npos);
}
