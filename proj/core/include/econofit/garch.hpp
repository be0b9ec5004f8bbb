#pragma once

#include <optional>
#include <span>
#include <vector>

#include "econofit/detail/model_base.hpp"

namespace econofit {

struct GarchParams {
  double mu;      // variance intercept
  double alpha;   // ARCH weight
  double beta;    // GARCH weight
  double sigma1;  // initial volatility
};

/// sigma^2_{t+1} = mu + alpha r_t^2 + beta sigma^2_t
template <typename T>
struct GarchRecursion {
  T mu, alpha, beta;

  template <typename R>
  T next_variance(const T& variance, const R& r) const {
    return mu + alpha * (r * r) + beta * variance;
  }
};

/// GARCH(1,1) on log prices. Coordinates: mu, sigma1 lower(0); alpha, beta
/// interval(0, 1). Every return carries a likelihood term, the first one
/// with variance sigma1^2.
class GarchModel final : public detail::ModelBase<GarchModel> {
 public:
  GarchModel(std::optional<PriceSeries> data, const ModelOptions& options);

  std::size_t first_return() const override { return 0; }
  LatentPath latent_path(std::span<const double> theta) const override;
  SimulatedPath simulate(std::span<const double> structural, std::size_t T, std::span<const double> init,
                         Rng& rng) const override;
  ForecastPath forecast(std::span<const double> theta, std::size_t horizon, Rng& rng) const override;

  /// Log-likelihood at constrained theta; adds d/dtheta into dtheta.
  double loglik_gradient(std::span<const double> theta, std::span<double> dtheta) const;

  template <typename T>
  T loglik(std::span<const T> theta, std::vector<double>* pointwise) const {
    const GarchRecursion<T> rec{theta[0], theta[1], theta[2]};
    T variance = theta[3] * theta[3];
    T total = 0.0;
    if (pointwise) pointwise->resize(returns_.size());
    for (std::size_t j = 0; j < returns_.size(); ++j) {
      const T term = math::normal_lpdf_var(returns_[j], 0.0, variance);
      if (pointwise) (*pointwise)[j] = ad::value_of(term);
      total += term;
      variance = rec.next_variance(variance, returns_[j]);
    }
    return total;
  }

 private:
  std::vector<double> returns_;
};

}  // namespace econofit
