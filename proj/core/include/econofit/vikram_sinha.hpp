#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "econofit/detail/model_base.hpp"

namespace econofit {

struct VsParams {
  double mu;         // sensitivity to mispricing
  double tau;        // running-average weight
  double sigma_max;  // demand scale
};

/// Time constant -1 / log(tau) of the running price average.
inline double vs_time_constant(double tau) { return -1.0 / std::log(tau); }

/// Continuous-demand Vikram-Sinha recursion:
///   <p_t> = (1 - tau) p_t + tau <p_{t-1}>
///   P_t   = exp(-mu |log(p_t / <p_t>)|)
///   r_{t+1} ~ N(0, 2 sigma_max^2 P_t)
/// Averages run on prices, not log prices.
template <typename T>
struct VsRecursion {
  T mu, tau, sigma_max;

  template <typename A>
  T next_average(const A& previous, double price) const {
    return (1.0 - tau) * price + tau * previous;
  }

  /// log of the conditional return variance given log(p_t) and log(<p_t>).
  template <typename L>
  T log_variance(double log_price, const L& log_average) const {
    using std::abs;
    using std::log;
    using ad::abs;
    using ad::log;
    return std::numbers::ln2 + 2.0 * log(sigma_max) - mu * abs(log_price - log_average);
  }
};

/// Coordinates: mu lower(0), tau interval(0, 1), sigma_max lower(0). Prices
/// enter relative to the first observation; the log ratio p / <p> is
/// unaffected by that scaling.
class VsModel final : public detail::ModelBase<VsModel> {
 public:
  VsModel(std::optional<PriceSeries> data, const ModelOptions& options);

  std::size_t first_return() const override { return 0; }
  LatentPath latent_path(std::span<const double> theta) const override;
  SimulatedPath simulate(std::span<const double> structural, std::size_t T, std::span<const double> init,
                         Rng& rng) const override;
  ForecastPath forecast(std::span<const double> theta, std::size_t horizon, Rng& rng) const override;

  /// Log-likelihood at constrained theta; adds d/dtheta into dtheta.
  double loglik_gradient(std::span<const double> theta, std::span<double> dtheta) const;

  template <typename T>
  T loglik(std::span<const T> theta, std::vector<double>* pointwise) const {
    using std::exp;
    using std::log;
    using ad::exp;
    using ad::log;
    const VsRecursion<T> rec{theta[0], theta[1], theta[2]};
    const std::size_t n = returns_.size();
    if (pointwise) pointwise->resize(n);
    T total = 0.0;
    T average = scaled_prices_[0];
    T log_average = scaled_log_prices_[0];
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) {
        average = rec.next_average(average, scaled_prices_[j]);
        log_average = log(average);
      }
      const T log_var = rec.log_variance(scaled_log_prices_[j], log_average);
      const T term = -math::kLogSqrtTwoPi - 0.5 * log_var - 0.5 * (returns_[j] * returns_[j]) * exp(-log_var);
      if (pointwise) (*pointwise)[j] = ad::value_of(term);
      total += term;
    }
    return total;
  }

 private:
  std::vector<double> returns_;
  std::vector<double> scaled_log_prices_;
  std::vector<double> scaled_prices_;
};

}  // namespace econofit
