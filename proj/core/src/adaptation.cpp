#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "econofit/sampler.hpp"

namespace econofit {

DualAveraging::DualAveraging(double target_accept, double gamma, double t0, double kappa)
    : target_(target_accept), gamma_(gamma), t0_(t0), kappa_(kappa) {
  if (!(target_accept > 0.0 && target_accept < 1.0)) throw std::invalid_argument("target_accept must lie in (0, 1)");
}

void DualAveraging::restart(double eps) {
  mu_ = std::log(10.0 * eps);
  log_eps_ = std::log(eps);
  log_eps_bar_ = 0.0;
  h_bar_ = 0.0;
  count_ = 0;
}

double DualAveraging::update(double accept_stat) {
  ++count_;
  const double m = static_cast<double>(count_);
  const double eta = 1.0 / (m + t0_);
  h_bar_ = (1.0 - eta) * h_bar_ + eta * (target_ - accept_stat);
  log_eps_ = mu_ - std::sqrt(m) / gamma_ * h_bar_;
  const double w = std::pow(m, -kappa_);
  log_eps_bar_ = w * log_eps_ + (1.0 - w) * log_eps_bar_;
  return std::exp(log_eps_);
}

double DualAveraging::final_step_size() const {
  return count_ == 0 ? std::exp(log_eps_) : std::exp(log_eps_bar_);
}

WindowSchedule::WindowSchedule(int warmup) : warmup_(warmup) {
  if (warmup < 20) throw std::invalid_argument("warmup must be at least 20 iterations");
  init_buffer_ = 75;
  term_buffer_ = 50;
  int base = 25;
  if (init_buffer_ + term_buffer_ + base > warmup) {
    init_buffer_ = static_cast<int>(0.15 * warmup);
    term_buffer_ = static_cast<int>(0.1 * warmup);
    base = warmup - init_buffer_ - term_buffer_;
  }
  const int last = warmup - term_buffer_;
  int start = init_buffer_;
  int size = base;
  while (true) {
    int end = start + size;
    if (end >= last || end + 2 * size > last) {
      ends_.push_back(last - 1);
      break;
    }
    ends_.push_back(end - 1);
    start = end;
    size *= 2;
  }
}

bool WindowSchedule::in_window(int iteration) const {
  return iteration >= init_buffer_ && iteration < warmup_ - term_buffer_;
}

bool WindowSchedule::is_window_end(int iteration) const {
  return std::find(ends_.begin(), ends_.end(), iteration) != ends_.end();
}

void VarianceEstimator::add(std::span<const double> x) {
  ++n_;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double delta = x[i] - mean_[i];
    mean_[i] += delta / static_cast<double>(n_);
    m2_[i] += delta * (x[i] - mean_[i]);
  }
}

std::vector<double> VarianceEstimator::regularized() const {
  std::vector<double> out(mean_.size(), 1.0);
  if (n_ < 2) return out;
  const double n = static_cast<double>(n_);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double var = m2_[i] / (n - 1.0);
    out[i] = (n / (n + 5.0)) * var + 1e-3 * (5.0 / (n + 5.0));
  }
  return out;
}

void VarianceEstimator::reset() {
  n_ = 0;
  std::fill(mean_.begin(), mean_.end(), 0.0);
  std::fill(m2_.begin(), m2_.end(), 0.0);
}

double find_initial_step_size(const PhasePoint& z, std::span<const double> inv_mass, const DensityTarget& target,
                              Rng& rng, double eps) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double log_half = std::log(0.5);
  auto trial = [&](double step) {
    PhasePoint p = z;
    p.momentum.resize(p.theta.size());
    for (std::size_t i = 0; i < p.momentum.size(); ++i) p.momentum[i] = normal(rng) / std::sqrt(inv_mass[i]);
    const double joint0 = joint_log_density(p, inv_mass);
    if (!leapfrog(p, step, inv_mass, target)) return -std::numeric_limits<double>::infinity();
    const double delta = joint_log_density(p, inv_mass) - joint0;
    return std::isfinite(delta) ? delta : -std::numeric_limits<double>::infinity();
  };

  double delta = trial(eps);
  const int direction = delta > log_half ? 1 : -1;
  for (int iter = 0; iter < 100; ++iter) {
    if (direction == 1 && !(delta > log_half)) break;
    if (direction == -1 && !(delta < log_half)) break;
    const double next = direction == 1 ? 2.0 * eps : 0.5 * eps;
    if (next > 1e7 || next < 1e-12) break;
    eps = next;
    delta = trial(eps);
  }
  return eps;
}

}  // namespace econofit
