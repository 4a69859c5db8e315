#include <benchmark/benchmark.h>

#include <random>

#include "fermatq/char_sums.hpp"
#include "fermatq/quotient.hpp"
#include "fermatq/sieve_lab.hpp"
#include "fermatq/subgroup.hpp"

using namespace fermatq;

namespace {

constexpr u64 kPrime = 10007;

void BM_QuotientTable(benchmark::State& state) {
  const OddPrime p(kPrime);
  const auto N = static_cast<u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(QuotientTable(p, N).raw().data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(N));
}
BENCHMARK(BM_QuotientTable)->Range(1 << 10, 1 << 20);

// Baseline for the sieve: one modular exponentiation per entry.
void BM_QuotientPointwise(benchmark::State& state) {
  const OddPrime p(kPrime);
  const auto N = static_cast<u64>(state.range(0));
  for (auto _ : state) {
    std::uint64_t acc = 0;
    for (u64 n = 1; n <= N; ++n) acc += fermat_quotient(p, n).raw();
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(N));
}
BENCHMARK(BM_QuotientPointwise)->Range(1 << 10, 1 << 20);

void BM_MaxExpSum(benchmark::State& state) {
  const OddPrime p(static_cast<u64>(state.range(0)));
  const u64 N = 4 * p.value();
  for (auto _ : state) benchmark::DoNotOptimize(max_exp_sum(p, N).value);
}
BENCHMARK(BM_MaxExpSum)->Arg(101)->Arg(1009)->Arg(10007);

void BM_CountRatios(benchmark::State& state) {
  const OddPrime p(static_cast<u64>(state.range(0)));
  const SubgroupModM G = pth_power_residues(p);
  const u64 Z = p.value() * p.value() / 4;
  for (auto _ : state) benchmark::DoNotOptimize(count_ratios(G, Z));
}
BENCHMARK(BM_CountRatios)->Arg(31)->Arg(101)->Arg(211);

void BM_LargeSieveLhs(benchmark::State& state) {
  const auto R = static_cast<u64>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  std::vector<Complex> coeffs(R * R);
  for (auto& z : coeffs) z = Complex(gauss(rng), gauss(rng));
  const TrigPolynomial poly(std::move(coeffs));
  for (auto _ : state) benchmark::DoNotOptimize(large_sieve_lhs(poly, R));
}
BENCHMARK(BM_LargeSieveLhs)->Arg(8)->Arg(16)->Arg(32);

}  // namespace
BENCHMARK_MAIN();
