// Microbenchmarks for the hot paths: per-category P-values, the HC scan,
// Poisson sampling, and full-table generation.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "hicrit/hc.hpp"
#include "hicrit/model.hpp"
#include "hicrit/pvalues.hpp"
#include "hicrit/rng.hpp"
#include "hicrit/specfun.hpp"

namespace {

using hicrit::CountTablePair;
using hicrit::PValueKind;
using hicrit::PValueVector;
using hicrit::RandomStream;
using hicrit::RareWeakParams;

RareWeakParams bench_params(std::size_t N, double gamma) {
  RareWeakParams params;
  params.N = N;
  params.n_x = params.n_y = std::pow(static_cast<double>(N), gamma);
  params.beta = 0.6;
  params.r = 1.5;
  return params;
}

void BM_ExactPValue(benchmark::State& state) {
  const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t x = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hicrit::exact_binom_pvalue({x % (n + 1), n - x % (n + 1)}, 0.5));
    ++x;
  }
}
BENCHMARK(BM_ExactPValue)->Arg(20)->Arg(100)->Arg(1000);

void BM_BinomTail(benchmark::State& state) {
  const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hicrit::binom_tail(n, 0.5, (n * 3) / 5, hicrit::Tail::upper));
  }
}
BENCHMARK(BM_BinomTail)->Arg(1000)->Arg(100000);

void BM_PoissonSample(benchmark::State& state) {
  const double rate = static_cast<double>(state.range(0)) / 100.0;
  RandomStream rng{1234};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hicrit::poisson_sample(rate, rng));
  }
}
BENCHMARK(BM_PoissonSample)->Arg(16)->Arg(4000)->Arg(400000);  // rates 0.16, 40, 4000

void BM_SampleNullTable(benchmark::State& state) {
  const RareWeakParams params = bench_params(static_cast<std::size_t>(state.range(0)), 1.4);
  std::uint64_t rep = 0;
  const RandomStream master{42};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hicrit::sample_null(params, master.derive(rep++)));
  }
}
BENCHMARK(BM_SampleNullTable)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_SampleAltTable(benchmark::State& state) {
  const RareWeakParams params = bench_params(static_cast<std::size_t>(state.range(0)), 1.4);
  std::uint64_t rep = 0;
  const RandomStream master{43};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hicrit::sample_alt(params, master.derive(rep++)));
  }
}
BENCHMARK(BM_SampleAltTable)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_PValueVector(benchmark::State& state) {
  const RareWeakParams params = bench_params(static_cast<std::size_t>(state.range(0)), 1.4);
  const CountTablePair tables = hicrit::sample_null(params, RandomStream{7});
  const PValueKind mode =
      state.range(1) == 0 ? PValueKind::exact : PValueKind::randomized;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hicrit::pvalue_vector(tables, mode, 0.5, RandomStream{9}));
  }
}
BENCHMARK(BM_PValueVector)
    ->Args({10000, 0})
    ->Args({10000, 1})
    ->Unit(benchmark::kMicrosecond);

void BM_HcStatistic(benchmark::State& state) {
  const RareWeakParams params = bench_params(static_cast<std::size_t>(state.range(0)), 1.4);
  const CountTablePair tables = hicrit::sample_null(params, RandomStream{8});
  const PValueVector pv = hicrit::pvalue_vector(tables, PValueKind::exact, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hicrit::hc_statistic(pv, hicrit::HCConfig{0.1}));
  }
}
BENCHMARK(BM_HcStatistic)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
