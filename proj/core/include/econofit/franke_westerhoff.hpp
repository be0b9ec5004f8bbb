#pragma once

#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "econofit/detail/model_base.hpp"

namespace econofit {

/// Scale constants of the FW model. They only rescale the other parameters
/// and are never sampled.
inline constexpr double kFwBeta = 1.0;
inline constexpr double kFwMu = 0.01;

struct FwParams {
  double phi;      // fundamentalist reaction
  double xi;       // chartist reaction
  double sigma_f;  // fundamentalist demand sd
  double sigma_c;  // chartist demand sd
  double alpha_0;  // predisposition
  double alpha_n;  // herding
  double alpha_p;  // misalignment

  std::vector<double> as_vector() const { return {phi, xi, sigma_f, sigma_c, alpha_0, alpha_n, alpha_p}; }
};

/// DCA-HPM dynamics with the demands marginalised:
///   n^f_t = logistic(beta a_{t-1}),  n^c_t = 1 - n^f_t
///   a_t   = alpha_0 + alpha_n (n^f_t - n^c_t) + alpha_p (p* - p_t)^2
///   r_{t+1} ~ N(mu (n^f phi (p* - p_t) + n^c xi (p_t - p_{t-1})),
///               mu^2 ((n^f)^2 sigma_f^2 + (n^c)^2 sigma_c^2))
template <typename T>
struct FwRecursion {
  T phi, xi, sigma_f, sigma_c, alpha_0, alpha_n, alpha_p;

  struct Fractions {
    T fundamentalist;
    T chartist;
  };

  struct Moments {
    T mean;
    T variance;
  };

  static Fractions fractions(const T& attractiveness) {
    return {math::logistic(kFwBeta * attractiveness), math::logistic(-kFwBeta * attractiveness)};
  }

  template <typename P>
  Moments moments(const Fractions& n, const P& p_star, double p, double p_prev) const {
    const T mean = kFwMu * (n.fundamentalist * phi * (p_star - p) + n.chartist * xi * (p - p_prev));
    const T fs = n.fundamentalist * sigma_f;
    const T cs = n.chartist * sigma_c;
    return {mean, (kFwMu * kFwMu) * (fs * fs + cs * cs)};
  }

  template <typename P>
  T attractiveness(const Fractions& n, const P& p_star, double p) const {
    const auto gap = p_star - p;
    return alpha_0 + alpha_n * (n.fundamentalist - n.chartist) + alpha_p * (gap * gap);
  }
};

/// FW DCA-HPM model. Structural coordinates: phi, xi, sigma_f, sigma_c
/// lower(0); alpha_0 unbounded; alpha_n, alpha_p lower(0). The random-walk
/// variant adds sigma_star lower(0) and one standardized innovation per
/// observed price, p*_t = p_1 + sigma_star * sum_{k<=t} eps_k.
///
/// The attractiveness at the first price is 0, so n^f = 0.5 for the first
/// two prices; likelihood terms start with the return into the third price.
class FwModel final : public detail::ModelBase<FwModel> {
 public:
  enum class Mode { kFixed, kRandomWalk };

  FwModel(Mode mode, std::optional<PriceSeries> data, const ModelOptions& options);

  Mode mode() const { return mode_; }
  double p_star() const { return p_star_; }

  std::size_t first_return() const override { return 1; }
  LatentPath latent_path(std::span<const double> theta) const override;
  SimulatedPath simulate(std::span<const double> structural, std::size_t T, std::span<const double> init,
                         Rng& rng) const override;
  ForecastPath forecast(std::span<const double> theta, std::size_t horizon, Rng& rng) const override;

  /// Log-likelihood at constrained theta; adds d/dtheta into dtheta.
  double loglik_gradient(std::span<const double> theta, std::span<double> dtheta) const;

  template <typename T>
  T loglik(std::span<const T> theta, std::vector<double>* pointwise) const {
    if (mode_ == Mode::kFixed) return loglik_impl<T, false>(theta, pointwise);
    return loglik_impl<T, true>(theta, pointwise);
  }

 private:
  template <typename T, bool kRandomWalk>
  T loglik_impl(std::span<const T> theta, std::vector<double>* pointwise) const {
    const FwRecursion<T> rec{theta[0], theta[1], theta[2], theta[3], theta[4], theta[5], theta[6]};
    const auto& p = data_->log_prices();
    const std::size_t n = p.size();
    if (pointwise) pointwise->resize(n - 2);

    using P = std::conditional_t<kRandomWalk, T, double>;
    P p_star = p_star_;
    if constexpr (kRandomWalk) p_star = p[0] + theta[7] * theta[8];

    T total = 0.0;
    T attract = 0.0;
    for (std::size_t t = 1; t + 1 < n; ++t) {
      if constexpr (kRandomWalk) p_star = p_star + theta[7] * theta[8 + t];
      const auto frac = FwRecursion<T>::fractions(attract);
      const auto m = rec.moments(frac, p_star, p[t], p[t - 1]);
      const T term = math::normal_lpdf_var(p[t + 1] - p[t], m.mean, m.variance);
      if (pointwise) (*pointwise)[t - 1] = ad::value_of(term);
      total += term;
      attract = rec.attractiveness(frac, p_star, p[t]);
    }
    return total;
  }

  Mode mode_;
  double p_star_;
};

}  // namespace econofit
