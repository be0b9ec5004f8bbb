#include "econofit/vikram_sinha.hpp"

#include <stdexcept>

namespace econofit {

VsModel::VsModel(std::optional<PriceSeries> data, const ModelOptions& options)
    : ModelBase(ModelKind::kVs, std::move(data)) {
  if (data_) {
    returns_ = data_->returns();
    const auto& p = data_->log_prices();
    scaled_log_prices_.resize(p.size());
    scaled_prices_.resize(p.size());
    for (std::size_t t = 0; t < p.size(); ++t) {
      scaled_log_prices_[t] = p[t] - p[0];
      scaled_prices_[t] = std::exp(scaled_log_prices_[t]);
    }
  }
  TransformSpec spec({Constraint::lower_bounded(0.0), Constraint::interval(0.0, 1.0), Constraint::lower_bounded(0.0)},
                     {"mu", "tau", "sigma_max"});
  set_parameters(std::move(spec), 3, options);
}

double VsModel::loglik_gradient(std::span<const double> theta, std::span<double> dtheta) const {
  const VsRecursion<double> rec{theta[0], theta[1], theta[2]};
  double average = scaled_prices_[0];
  double d_average = 0.0;  // d average / d tau
  double g_mu = 0.0, g_tau = 0.0, g_sigma = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < returns_.size(); ++j) {
    if (j > 0) {
      d_average = average - scaled_prices_[j] + rec.tau * d_average;
      average = rec.next_average(average, scaled_prices_[j]);
    }
    const double gap = scaled_log_prices_[j] - std::log(average);
    const double log_var = rec.log_variance(scaled_log_prices_[j], std::log(average));
    const double scaled = returns_[j] * returns_[j] * std::exp(-log_var);
    total += -math::kLogSqrtTwoPi - 0.5 * log_var - 0.5 * scaled;
    const double w = 0.5 * (scaled - 1.0);
    const double sign = gap > 0.0 ? 1.0 : (gap < 0.0 ? -1.0 : 0.0);
    g_mu -= w * std::abs(gap);
    g_tau += w * rec.mu * sign * d_average / average;
    g_sigma += 2.0 * w / rec.sigma_max;
  }
  dtheta[0] += g_mu;
  dtheta[1] += g_tau;
  dtheta[2] += g_sigma;
  return total;
}

LatentPath VsModel::latent_path(std::span<const double> theta) const {
  const VsRecursion<double> rec{theta[0], theta[1], theta[2]};
  const std::size_t n = scaled_prices_.size();
  LatentPath path;
  path.sigma.resize(n);
  double average = scaled_prices_[0];
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) average = rec.next_average(average, scaled_prices_[t]);
    path.sigma[t] = std::exp(0.5 * rec.log_variance(scaled_log_prices_[t], std::log(average)));
  }
  return path;
}

SimulatedPath VsModel::simulate(std::span<const double> structural, std::size_t T, std::span<const double> init,
                                Rng& rng) const {
  if (T < 3) throw std::invalid_argument("simulate: T must be at least 3");
  check_structural(structural);
  const VsRecursion<double> rec{structural[0], structural[1], structural[2]};
  std::normal_distribution<double> z(0.0, 1.0);
  SimulatedPath out;
  out.log_prices.resize(T);
  out.latent.sigma.resize(T);
  const double p0 = init.empty() ? 0.0 : init[0];
  out.log_prices[0] = p0;
  double average = 1.0;
  for (std::size_t t = 0; t < T; ++t) {
    const double scaled_log = out.log_prices[t] - p0;
    if (t > 0) average = rec.next_average(average, std::exp(scaled_log));
    const double sd = std::exp(0.5 * rec.log_variance(scaled_log, std::log(average)));
    out.latent.sigma[t] = sd;
    if (t + 1 < T) out.log_prices[t + 1] = out.log_prices[t] + sd * z(rng);
  }
  return out;
}

ForecastPath VsModel::forecast(std::span<const double> theta, std::size_t horizon, Rng& rng) const {
  const VsRecursion<double> rec{theta[0], theta[1], theta[2]};
  double average = scaled_prices_[0];
  for (std::size_t t = 1; t < scaled_prices_.size(); ++t) average = rec.next_average(average, scaled_prices_[t]);

  std::normal_distribution<double> z(0.0, 1.0);
  const double p0 = data().log_prices().front();
  double scaled_log = scaled_log_prices_.back();
  ForecastPath out;
  for (std::size_t h = 0; h < horizon; ++h) {
    if (h > 0) average = rec.next_average(average, std::exp(scaled_log));
    const double sd = std::exp(0.5 * rec.log_variance(scaled_log, std::log(average)));
    const double r = sd * z(rng);
    scaled_log += r;
    out.sigma.push_back(sd);
    out.returns.push_back(r);
    out.log_prices.push_back(scaled_log + p0);
  }
  return out;
}

}  // namespace econofit
