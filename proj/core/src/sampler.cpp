#include "econofit/sampler.hpp"

#include <cmath>
#include <limits>

namespace econofit {
namespace {

struct Subtree {
  PhasePoint minus;
  PhasePoint plus;
  PhasePoint proposal;
  double n_valid = 0.0;  // states inside the slice
  bool ok = true;       // neither diverged nor turned
  bool divergent = false;
  double sum_accept = 0.0;
  int n_leapfrog = 0;
};

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

bool no_u_turn(const PhasePoint& minus, const PhasePoint& plus, std::span<const double> inv_mass) {
  double dot_minus = 0.0;
  double dot_plus = 0.0;
  for (std::size_t i = 0; i < minus.theta.size(); ++i) {
    const double d = plus.theta[i] - minus.theta[i];
    dot_minus += d * inv_mass[i] * minus.momentum[i];
    dot_plus += d * inv_mass[i] * plus.momentum[i];
  }
  return dot_minus >= 0.0 && dot_plus >= 0.0;
}

class TreeBuilder {
 public:
  TreeBuilder(double eps, std::span<const double> inv_mass, const DensityTarget& target, double log_slice,
              double joint0, Rng& rng)
      : eps_(eps), inv_mass_(inv_mass), target_(target), log_slice_(log_slice), joint0_(joint0), rng_(rng) {}

  Subtree build(const PhasePoint& edge, int direction, int depth) {
    if (depth == 0) return single_step(edge, direction);

    Subtree first = build(edge, direction, depth - 1);
    if (!first.ok) return first;

    Subtree second = build(direction < 0 ? first.minus : first.plus, direction, depth - 1);
    const double total = first.n_valid + second.n_valid;
    if (second.n_valid > 0.0 && uniform01(rng_) < second.n_valid / total) first.proposal = std::move(second.proposal);
    if (direction < 0)
      first.minus = std::move(second.minus);
    else
      first.plus = std::move(second.plus);
    first.n_valid = total;
    first.sum_accept += second.sum_accept;
    first.n_leapfrog += second.n_leapfrog;
    first.divergent = second.divergent;
    first.ok = second.ok && no_u_turn(first.minus, first.plus, inv_mass_);
    return first;
  }

 private:
  Subtree single_step(const PhasePoint& edge, int direction) {
    Subtree t;
    PhasePoint z = edge;
    const bool evaluated = leapfrog(z, direction * eps_, inv_mass_, target_);
    t.n_leapfrog = 1;
    const double joint = evaluated ? joint_log_density(z, inv_mass_) : -std::numeric_limits<double>::infinity();
    if (!evaluated || !std::isfinite(joint) || joint0_ - joint > kDivergenceThreshold) {
      t.divergent = true;
      t.ok = false;
      t.n_valid = 0.0;
      t.sum_accept = 0.0;
    } else {
      t.n_valid = log_slice_ <= joint ? 1.0 : 0.0;
      t.sum_accept = std::min(1.0, std::exp(joint - joint0_));
    }
    t.minus = z;
    t.plus = z;
    t.proposal = std::move(z);
    return t;
  }

  double eps_;
  std::span<const double> inv_mass_;
  const DensityTarget& target_;
  double log_slice_;
  double joint0_;
  Rng& rng_;
};

}  // namespace

double kinetic_energy(std::span<const double> momentum, std::span<const double> inv_mass) {
  double k = 0.0;
  for (std::size_t i = 0; i < momentum.size(); ++i) k += momentum[i] * momentum[i] * inv_mass[i];
  return 0.5 * k;
}

void evaluate(const DensityTarget& target, PhasePoint& z) {
  z.grad.resize(z.theta.size());
  try {
    z.lp = target.log_density(z.theta, z.grad);
    z.valid = std::isfinite(z.lp);
  } catch (const RejectionError&) {
    z.valid = false;
  }
  if (!z.valid) z.lp = -std::numeric_limits<double>::infinity();
}

bool leapfrog(PhasePoint& z, double eps, std::span<const double> inv_mass, const DensityTarget& target) {
  const std::size_t d = z.theta.size();
  for (std::size_t i = 0; i < d; ++i) z.momentum[i] += 0.5 * eps * z.grad[i];
  for (std::size_t i = 0; i < d; ++i) z.theta[i] += eps * inv_mass[i] * z.momentum[i];
  evaluate(target, z);
  if (!z.valid) return false;
  for (std::size_t i = 0; i < d; ++i) z.momentum[i] += 0.5 * eps * z.grad[i];
  return true;
}

PhasePoint nuts_transition(const PhasePoint& current, double eps, std::span<const double> inv_mass,
                           const DensityTarget& target, int max_depth, Rng& rng, TransitionStats& stats) {
  PhasePoint z0 = current;
  std::normal_distribution<double> normal(0.0, 1.0);
  z0.momentum.resize(z0.theta.size());
  for (std::size_t i = 0; i < z0.momentum.size(); ++i) z0.momentum[i] = normal(rng) / std::sqrt(inv_mass[i]);

  const double joint0 = joint_log_density(z0, inv_mass);
  // log of u ~ Uniform(0, exp(joint0)); 1 - U lies in (0, 1].
  const double log_slice = joint0 + std::log1p(-uniform01(rng));
  TreeBuilder builder(eps, inv_mass, target, log_slice, joint0, rng);

  PhasePoint minus = z0;
  PhasePoint plus = z0;
  PhasePoint proposal = z0;
  double n_valid = 1.0;
  stats = TransitionStats{};
  double sum_accept = 0.0;

  for (int depth = 0; depth <= max_depth; ++depth) {
    const int direction = uniform01(rng) < 0.5 ? -1 : 1;
    Subtree sub = builder.build(direction < 0 ? minus : plus, direction, depth);
    stats.tree_depth = depth;
    stats.n_leapfrog += sub.n_leapfrog;
    sum_accept += sub.sum_accept;
    if (direction < 0)
      minus = std::move(sub.minus);
    else
      plus = std::move(sub.plus);

    if (sub.divergent) stats.divergent = true;
    if (!sub.ok) break;
    if (sub.n_valid > 0.0 && uniform01(rng) < sub.n_valid / n_valid) proposal = std::move(sub.proposal);
    n_valid += sub.n_valid;
    if (!no_u_turn(minus, plus, inv_mass)) break;
  }

  stats.accept_stat = stats.n_leapfrog > 0 ? sum_accept / stats.n_leapfrog : 0.0;
  stats.energy = -joint_log_density(proposal, inv_mass);
  return proposal;
}

}  // namespace econofit
