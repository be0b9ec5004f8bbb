#include <exception>
#include <stdexcept>
#include <thread>

#include "econofit/sampler.hpp"

namespace econofit {

void HmcConfig::validate() const {
  if (chains < 1) throw std::invalid_argument("chains must be >= 1");
  if (warmup < 20) throw std::invalid_argument("warmup must be >= 20");
  if (draws < 1) throw std::invalid_argument("draws must be >= 1");
  if (max_tree_depth < 0) throw std::invalid_argument("max_tree_depth must be >= 0");
  if (!(target_accept > 0.0 && target_accept < 1.0)) throw std::invalid_argument("target_accept must lie in (0, 1)");
  if (!(init_radius >= 0.0)) throw std::invalid_argument("init_radius must be >= 0");
}

std::vector<double> ChainOutput::column(std::size_t col) const {
  std::vector<double> out(num_draws());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = draw(r, col);
  return out;
}

std::uint64_t chain_seed(std::uint64_t seed, int index) {
  // splitmix64 of (seed, index) so neighbouring seeds give unrelated streams.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ChainOutput run_chain(const DensityTarget& target, const TransformSpec& spec, const HmcConfig& config, int index) {
  config.validate();
  const std::size_t dim = target.dimension();
  if (dim == 0) throw std::invalid_argument("target dimension must be >= 1");
  if (spec.size() != dim) throw std::invalid_argument("transform dimension does not match target");

  ChainOutput out;
  out.chain = index;
  out.seed = chain_seed(config.seed, index);
  out.dimension = dim;
  Rng rng(out.seed);

  PhasePoint z;
  z.theta.resize(dim);
  z.momentum.assign(dim, 0.0);
  std::uniform_real_distribution<double> init(-config.init_radius, config.init_radius);
  bool initialised = false;
  for (int attempt = 0; attempt < 100 && !initialised; ++attempt) {
    for (double& x : z.theta) x = init(rng);
    evaluate(target, z);
    initialised = z.valid;
  }
  if (!initialised) throw ChainFailure("could not find a finite initial point in 100 attempts");
  out.initial_unconstrained = z.theta;

  std::vector<double> inv_mass(dim, 1.0);
  double eps = find_initial_step_size(z, inv_mass, target, rng);
  DualAveraging averaging(config.target_accept);
  averaging.restart(eps);
  const WindowSchedule windows(config.warmup);
  VarianceEstimator variance(dim);

  int warmup_divergences = 0;
  for (int it = 0; it < config.warmup; ++it) {
    TransitionStats ts;
    z = nuts_transition(z, eps, inv_mass, target, config.max_tree_depth, rng, ts);
    if (ts.divergent) ++warmup_divergences;
    eps = averaging.update(ts.accept_stat);
    if (windows.in_window(it)) variance.add(z.theta);
    if (windows.is_window_end(it)) {
      inv_mass = variance.regularized();
      variance.reset();
      eps = find_initial_step_size(z, inv_mass, target, rng, eps);
      averaging.restart(eps);
    }
  }
  if (warmup_divergences == config.warmup)
    throw ChainFailure("every warmup transition diverged; the posterior geometry defeats the integrator");

  eps = averaging.final_step_size();
  out.adaptation.step_size = eps;
  out.adaptation.inv_mass = inv_mass;

  const auto draws = static_cast<std::size_t>(config.draws);
  out.draws.resize(draws * dim);
  out.unconstrained_draws.resize(draws * dim);
  out.stats.resize(draws);
  for (std::size_t it = 0; it < draws; ++it) {
    TransitionStats ts;
    z = nuts_transition(z, eps, inv_mass, target, config.max_tree_depth, rng, ts);
    out.stats[it] = IterationStats{ts.divergent, ts.tree_depth, ts.n_leapfrog, ts.accept_stat, ts.energy, eps};
    const Constrained c = constrain(z.theta, spec);
    std::copy(c.params.begin(), c.params.end(), out.draws.begin() + static_cast<std::ptrdiff_t>(it * dim));
    std::copy(z.theta.begin(), z.theta.end(), out.unconstrained_draws.begin() + static_cast<std::ptrdiff_t>(it * dim));
  }
  return out;
}

std::vector<ChainOutput> run_chains(const DensityTarget& target, const TransformSpec& spec, const HmcConfig& config) {
  config.validate();
  std::vector<ChainOutput> outputs(static_cast<std::size_t>(config.chains));
  auto work = [&](int c) {
    try {
      outputs[static_cast<std::size_t>(c)] = run_chain(target, spec, config, c);
    } catch (const std::exception& e) {
      ChainOutput failed;
      failed.chain = c;
      failed.seed = chain_seed(config.seed, c);
      failed.dimension = target.dimension();
      failed.failed = true;
      failed.error = e.what();
      outputs[static_cast<std::size_t>(c)] = std::move(failed);
    }
  };
  std::vector<std::jthread> threads;
  threads.reserve(outputs.size());
  for (int c = 0; c < config.chains; ++c) threads.emplace_back(work, c);
  threads.clear();  // joins
  return outputs;
}

std::vector<ChainOutput> run_chains(const Model& model, const HmcConfig& config) {
  return run_chains(model, model.transform(), config);
}

}  // namespace econofit
