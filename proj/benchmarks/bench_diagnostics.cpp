#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "econofit/diagnostics.hpp"

namespace {

using namespace econofit;

ChainSeries ar1_chains(std::size_t chains, std::size_t n, double rho) {
  Rng rng(5);
  std::normal_distribution<double> z(0.0, 1.0);
  ChainSeries out(chains, std::vector<double>(n));
  for (auto& c : out) {
    double x = 0.0;
    for (double& v : c) v = x = rho * x + z(rng);
  }
  return out;
}

void BM_SplitRhat(benchmark::State& state) {
  const auto chains = ar1_chains(4, 1000, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(split_rhat(chains));
}

void BM_Ess(benchmark::State& state) {
  const auto chains = ar1_chains(4, 1000, state.range(0) / 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(ess(chains));
}

void BM_PsisLoo(benchmark::State& state) {
  Rng rng(6);
  std::normal_distribution<double> z(-1.0, 0.3);
  LogLikMatrix m;
  m.draws = 1600;
  m.observations = static_cast<std::size_t>(state.range(0));
  m.values.resize(m.draws * m.observations);
  for (double& v : m.values) v = z(rng);
  for (auto _ : state) benchmark::DoNotOptimize(psis_loo(m));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SplitRhat);
BENCHMARK(BM_Ess)->Arg(0)->Arg(9);
BENCHMARK(BM_PsisLoo)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);
