#include "econofit/garch.hpp"

#include <cmath>
#include <stdexcept>

namespace econofit {

GarchModel::GarchModel(std::optional<PriceSeries> data, const ModelOptions& options)
    : ModelBase(ModelKind::kGarch, std::move(data)) {
  if (data_) returns_ = data_->returns();
  TransformSpec spec({Constraint::lower_bounded(0.0), Constraint::interval(0.0, 1.0),
                      Constraint::interval(0.0, 1.0), Constraint::lower_bounded(0.0)},
                     {"mu", "alpha", "beta", "sigma1"});
  set_parameters(std::move(spec), 4, options);
}

double GarchModel::loglik_gradient(std::span<const double> theta, std::span<double> dtheta) const {
  const GarchRecursion<double> rec{theta[0], theta[1], theta[2]};
  double variance = theta[3] * theta[3];
  // d variance / d (mu, alpha, beta, sigma1), carried forward.
  double dv[4] = {0.0, 0.0, 0.0, 2.0 * theta[3]};
  double g[4] = {0.0, 0.0, 0.0, 0.0};
  double total = 0.0;
  for (double r : returns_) {
    const double r2 = r * r;
    total += math::normal_lpdf_var(r, 0.0, variance);
    const double w = 0.5 * (r2 / variance - 1.0) / variance;
    for (int i = 0; i < 4; ++i) g[i] += w * dv[i];
    dv[0] = 1.0 + rec.beta * dv[0];
    dv[1] = r2 + rec.beta * dv[1];
    dv[2] = variance + rec.beta * dv[2];
    dv[3] = rec.beta * dv[3];
    variance = rec.next_variance(variance, r);
  }
  for (int i = 0; i < 4; ++i) dtheta[i] += g[i];
  return total;
}

LatentPath GarchModel::latent_path(std::span<const double> theta) const {
  const auto& p = data().log_prices();
  const GarchRecursion<double> rec{theta[0], theta[1], theta[2]};
  LatentPath path;
  path.sigma.resize(p.size());
  double variance = theta[3] * theta[3];
  for (std::size_t t = 0; t < p.size(); ++t) {
    path.sigma[t] = std::sqrt(variance);
    if (t + 1 < p.size()) variance = rec.next_variance(variance, returns_[t]);
  }
  return path;
}

SimulatedPath GarchModel::simulate(std::span<const double> structural, std::size_t T,
                                   std::span<const double> init, Rng& rng) const {
  if (T < 3) throw std::invalid_argument("simulate: T must be at least 3");
  check_structural(structural);
  const GarchRecursion<double> rec{structural[0], structural[1], structural[2]};
  std::normal_distribution<double> z(0.0, 1.0);
  SimulatedPath out;
  out.log_prices.resize(T);
  out.latent.sigma.resize(T);
  out.log_prices[0] = init.empty() ? 0.0 : init[0];
  double variance = structural[3] * structural[3];
  for (std::size_t t = 0; t < T; ++t) {
    out.latent.sigma[t] = std::sqrt(variance);
    if (t + 1 == T) break;
    const double r = out.latent.sigma[t] * z(rng);
    out.log_prices[t + 1] = out.log_prices[t] + r;
    variance = rec.next_variance(variance, r);
  }
  return out;
}

ForecastPath GarchModel::forecast(std::span<const double> theta, std::size_t horizon, Rng& rng) const {
  const LatentPath path = latent_path(theta);
  const GarchRecursion<double> rec{theta[0], theta[1], theta[2]};
  std::normal_distribution<double> z(0.0, 1.0);
  ForecastPath out;
  double variance = path.sigma.back() * path.sigma.back();
  double price = data().log_prices().back();
  for (std::size_t h = 0; h < horizon; ++h) {
    const double sd = std::sqrt(variance);
    const double r = sd * z(rng);
    price += r;
    out.sigma.push_back(sd);
    out.returns.push_back(r);
    out.log_prices.push_back(price);
    variance = rec.next_variance(variance, r);
  }
  return out;
}

}  // namespace econofit
