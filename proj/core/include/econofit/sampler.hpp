#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "econofit/distributions.hpp"
#include "econofit/model.hpp"
#include "econofit/param_space.hpp"

namespace econofit {

struct HmcConfig {
  int chains = 4;
  int warmup = 400;
  int draws = 400;
  int max_tree_depth = 10;
  double target_accept = 0.8;
  std::uint64_t seed = 0;
  double init_radius = 2.0;

  void validate() const;
};

/// Energy error (nats) beyond which a trajectory is declared divergent.
inline constexpr double kDivergenceThreshold = 1000.0;

struct PhasePoint {
  std::vector<double> theta;
  std::vector<double> momentum;
  double lp = 0.0;
  std::vector<double> grad;

  /// False when the last evaluation was rejected (non-finite density).
  bool valid = true;
};

/// Kinetic energy 0.5 m' M^{-1} m for a diagonal inverse mass.
double kinetic_energy(std::span<const double> momentum, std::span<const double> inv_mass);

/// -H(theta, m) = lp - kinetic.
inline double joint_log_density(const PhasePoint& z, std::span<const double> inv_mass) {
  return z.lp - kinetic_energy(z.momentum, inv_mass);
}

/// Evaluates lp and gradient into `z`; marks z invalid instead of throwing
/// when the target rejects the point.
void evaluate(const DensityTarget& target, PhasePoint& z);

/// One leapfrog step of size eps (negative eps integrates backwards).
/// Returns false when the new point could not be evaluated.
bool leapfrog(PhasePoint& z, double eps, std::span<const double> inv_mass, const DensityTarget& target);

struct TransitionStats {
  bool divergent = false;
  int tree_depth = 0;
  int n_leapfrog = 0;
  double accept_stat = 0.0;
  double energy = 0.0;  // Hamiltonian of the returned state
};

/// One NUTS transition with slice-variable tree doubling. The returned state
/// is drawn uniformly among valid trajectory states. `max_depth` counts
/// doublings beyond the first step: depth 0 is a single leapfrog step with a
/// Metropolis accept of probability min(1, exp(H_old - H_new)).
PhasePoint nuts_transition(const PhasePoint& current, double eps, std::span<const double> inv_mass,
                           const DensityTarget& target, int max_depth, Rng& rng, TransitionStats& stats);

/// Nesterov dual averaging of log step size toward a target accept rate.
class DualAveraging {
 public:
  explicit DualAveraging(double target_accept, double gamma = 0.05, double t0 = 10.0, double kappa = 0.75);

  void restart(double eps);
  /// Feed one accept statistic; returns the step size to use next.
  double update(double accept_stat);
  double final_step_size() const;

  double gamma() const { return gamma_; }
  double t0() const { return t0_; }
  double kappa() const { return kappa_; }

 private:
  double target_, gamma_, t0_, kappa_;
  double mu_ = 0.0, log_eps_ = 0.0, log_eps_bar_ = 0.0, h_bar_ = 0.0;
  int count_ = 0;
};

/// Warmup windows for mass-matrix estimation: an initial buffer, a sequence
/// of doubling windows and a terminal buffer, each window forgetting the
/// previous one.
class WindowSchedule {
 public:
  explicit WindowSchedule(int warmup);

  int init_buffer() const { return init_buffer_; }
  int term_buffer() const { return term_buffer_; }
  /// Iteration indices (0-based) at which a window closes.
  const std::vector<int>& window_ends() const { return ends_; }
  bool in_window(int iteration) const;
  bool is_window_end(int iteration) const;

 private:
  int warmup_;
  int init_buffer_;
  int term_buffer_;
  std::vector<int> ends_;
};

/// Running regularised variance for the diagonal inverse mass.
class VarianceEstimator {
 public:
  explicit VarianceEstimator(std::size_t dim) : mean_(dim, 0.0), m2_(dim, 0.0) {}
  void add(std::span<const double> x);
  std::size_t count() const { return n_; }
  /// (n / (n + 5)) var + 1e-3 (5 / (n + 5))
  std::vector<double> regularized() const;
  void reset();

 private:
  std::size_t n_ = 0;
  std::vector<double> mean_, m2_;
};

/// Heuristic initial step size: double or halve until the one-step accept
/// probability crosses 0.5.
double find_initial_step_size(const PhasePoint& z, std::span<const double> inv_mass, const DensityTarget& target,
                              Rng& rng, double eps = 1.0);

struct IterationStats {
  bool divergent = false;
  int tree_depth = 0;
  int n_leapfrog = 0;
  double accept_stat = 0.0;
  double energy = 0.0;
  double step_size = 0.0;
};

struct AdaptationResult {
  double step_size = 0.0;
  std::vector<double> inv_mass;
};

struct ChainOutput {
  int chain = 0;
  std::uint64_t seed = 0;
  std::size_t dimension = 0;
  /// Row-major, draws x dimension.
  std::vector<double> draws;
  std::vector<double> unconstrained_draws;
  std::vector<IterationStats> stats;
  std::vector<double> initial_unconstrained;
  AdaptationResult adaptation;
  bool failed = false;
  std::string error;

  std::size_t num_draws() const { return dimension == 0 ? 0 : draws.size() / dimension; }
  double draw(std::size_t row, std::size_t col) const { return draws[row * dimension + col]; }
  std::span<const double> row(std::size_t r) const { return {draws.data() + r * dimension, dimension}; }
  std::vector<double> column(std::size_t col) const;
};

/// Thrown when adaptation cannot proceed, e.g. every warmup transition
/// diverged.
class ChainFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seed of chain `index` derived from the run seed.
std::uint64_t chain_seed(std::uint64_t seed, int index);

/// Runs a single chain: random init in [-r, r], windowed warmup, sampling.
/// Throws ChainFailure on unrecoverable adaptation problems.
ChainOutput run_chain(const DensityTarget& target, const TransformSpec& spec, const HmcConfig& config, int index);

/// Runs config.chains chains concurrently. Failed chains are reported with
/// `failed` set; the others are returned unchanged. Output order is the chain
/// index regardless of completion order.
std::vector<ChainOutput> run_chains(const DensityTarget& target, const TransformSpec& spec, const HmcConfig& config);
std::vector<ChainOutput> run_chains(const Model& model, const HmcConfig& config);

}  // namespace econofit
