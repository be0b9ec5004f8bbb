#include <benchmark/benchmark.h>

#include <vector>

#include "econofit/model.hpp"

namespace {

using namespace econofit;

std::vector<double> truth(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGarch: return {1e-5, 0.1, 0.8, 0.01};
    case ModelKind::kVs: return {100.0, 0.999, 0.01};
    case ModelKind::kFwFixed: return {0.12, 1.5, 0.758, 2.087, -0.327, 1.79, 18.43};
    case ModelKind::kFwRandomWalk: return {0.12, 1.5, 0.758, 2.087, -0.327, 1.79, 18.43, 0.01};
  }
  return {};
}

// Model on 2000 simulated prices and an unconstrained point at the truth.
struct Setup {
  std::unique_ptr<Model> model;
  std::vector<double> u;

  explicit Setup(ModelKind kind, std::size_t T = 2000) {
    const auto params = truth(kind);
    Rng rng(1);
    const auto generator = make_model(kind, std::nullopt);
    model = make_model(kind, PriceSeries(generator->simulate(params, T, {}, rng).log_prices));
    u = unconstrain(params, model->transform().prefix(params.size()));
    u.resize(model->dimension(), 0.0);
  }
};

void BM_LogDensityGradient(benchmark::State& state, ModelKind kind) {
  const Setup s(kind);
  std::vector<double> grad(s.u.size());
  for (auto _ : state) benchmark::DoNotOptimize(s.model->log_density(s.u, grad));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(s.model->data().size()));
}

void BM_LogDensityTape(benchmark::State& state, ModelKind kind) {
  const Setup s(kind);
  std::vector<double> grad(s.u.size());
  for (auto _ : state) benchmark::DoNotOptimize(s.model->log_density_reference(s.u, grad));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(s.model->data().size()));
}

void BM_LogDensityValue(benchmark::State& state, ModelKind kind) {
  const Setup s(kind);
  for (auto _ : state) benchmark::DoNotOptimize(s.model->log_density_value(s.u));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(s.model->data().size()));
}

void BM_Simulate(benchmark::State& state, ModelKind kind) {
  const auto model = make_model(kind, std::nullopt);
  const auto params = truth(kind);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(model->simulate(params, 2000, {}, rng));
}

}  // namespace

BENCHMARK_CAPTURE(BM_LogDensityGradient, garch, ModelKind::kGarch);
BENCHMARK_CAPTURE(BM_LogDensityGradient, vs, ModelKind::kVs);
BENCHMARK_CAPTURE(BM_LogDensityGradient, fw_fixed, ModelKind::kFwFixed);
BENCHMARK_CAPTURE(BM_LogDensityGradient, fw_rw, ModelKind::kFwRandomWalk);
BENCHMARK_CAPTURE(BM_LogDensityTape, garch, ModelKind::kGarch);
BENCHMARK_CAPTURE(BM_LogDensityTape, vs, ModelKind::kVs);
BENCHMARK_CAPTURE(BM_LogDensityTape, fw_fixed, ModelKind::kFwFixed);
BENCHMARK_CAPTURE(BM_LogDensityTape, fw_rw, ModelKind::kFwRandomWalk);
BENCHMARK_CAPTURE(BM_LogDensityValue, garch, ModelKind::kGarch);
BENCHMARK_CAPTURE(BM_LogDensityValue, vs, ModelKind::kVs);
BENCHMARK_CAPTURE(BM_LogDensityValue, fw_fixed, ModelKind::kFwFixed);
BENCHMARK_CAPTURE(BM_LogDensityValue, fw_rw, ModelKind::kFwRandomWalk);
BENCHMARK_CAPTURE(BM_Simulate, garch, ModelKind::kGarch);
BENCHMARK_CAPTURE(BM_Simulate, fw_fixed, ModelKind::kFwFixed);
