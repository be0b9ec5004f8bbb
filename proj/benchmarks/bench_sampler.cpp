#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "econofit/model.hpp"
#include "econofit/sampler.hpp"

namespace {

using namespace econofit;

class StandardNormal final : public DensityTarget {
 public:
  explicit StandardNormal(std::size_t dim) : dim_(dim) {}
  std::size_t dimension() const override { return dim_; }
  double log_density(std::span<const double> u, std::span<double> grad) const override {
    double lp = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      lp -= 0.5 * u[i] * u[i];
      grad[i] = -u[i];
    }
    return lp;
  }

 private:
  std::size_t dim_;
};

PhasePoint start(const DensityTarget& target) {
  PhasePoint z;
  z.theta.assign(target.dimension(), 0.5);
  evaluate(target, z);
  return z;
}

void BM_LeapfrogNormal(benchmark::State& state) {
  const StandardNormal target(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> inv_mass(target.dimension(), 1.0);
  PhasePoint z = start(target);
  z.momentum.assign(target.dimension(), 0.1);
  for (auto _ : state) {
    leapfrog(z, 0.1, inv_mass, target);
    benchmark::DoNotOptimize(z.lp);
  }
}

void BM_NutsTransitionNormal(benchmark::State& state) {
  const StandardNormal target(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> inv_mass(target.dimension(), 1.0);
  PhasePoint z = start(target);
  Rng rng(3);
  TransitionStats stats;
  long long steps = 0;
  for (auto _ : state) {
    z = nuts_transition(z, 0.5, inv_mass, target, 10, rng, stats);
    steps += stats.n_leapfrog;
  }
  state.counters["leapfrog_per_transition"] =
      benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kAvgIterations);
}

void BM_NutsTransitionFw(benchmark::State& state) {
  const std::vector<double> truth{0.12, 1.5, 0.758, 2.087, -0.327, 1.79, 18.43};
  Rng sim(1);
  const auto generator = make_model(ModelKind::kFwFixed, std::nullopt);
  const auto model = make_model(ModelKind::kFwFixed, PriceSeries(generator->simulate(truth, 2000, {}, sim).log_prices));
  PhasePoint z;
  z.theta = unconstrain(truth, model->transform());
  evaluate(*model, z);
  const std::vector<double> inv_mass(model->dimension(), 0.05);
  Rng rng(4);
  TransitionStats stats;
  for (auto _ : state) z = nuts_transition(z, 0.1, inv_mass, *model, 10, rng, stats);
}

}  // namespace

BENCHMARK(BM_LeapfrogNormal)->Arg(10)->Arg(1000);
BENCHMARK(BM_NutsTransitionNormal)->Arg(10)->Arg(100);
BENCHMARK(BM_NutsTransitionFw)->Unit(benchmark::kMillisecond);
