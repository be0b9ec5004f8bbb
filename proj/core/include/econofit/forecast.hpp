#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "econofit/model.hpp"
#include "econofit/sampler.hpp"

namespace econofit {

inline constexpr std::array<double, 5> kFanLevels{0.025, 0.25, 0.5, 0.75, 0.975};
using FanQuantiles = std::array<double, 5>;

/// Per-step predictive quantiles at kFanLevels.
struct ForecastFan {
  std::size_t horizon = 0;
  std::size_t draws_used = 0;
  std::vector<FanQuantiles> returns;
  std::vector<FanQuantiles> log_prices;
  std::vector<FanQuantiles> sigma;
};

inline constexpr std::size_t kMinForecastDraws = 50;

/// Simulates `horizon` steps past the data for every retained posterior draw.
/// `max_draws` > 0 thins the pooled draws evenly. Throws std::invalid_argument
/// with fewer than kMinForecastDraws draws.
ForecastFan posterior_predictive(const Model& model, std::span<const ChainOutput> chains, std::size_t horizon,
                                 Rng& rng, std::size_t max_draws = 0);

struct PriorSeries {
  std::vector<double> structural;
  SimulatedPath path;
};

/// Draws structural parameters from the priors and simulates T prices each.
std::vector<PriorSeries> prior_predictive(const Model& model, std::size_t n_series, std::size_t T, Rng& rng,
                                          std::span<const double> init = {});

struct Band {
  double mean = 0.0;
  double lower = 0.0;  // 2.5%
  double upper = 0.0;  // 97.5%
};

/// Smoothing-distribution summaries per price index; n_f and p_star are empty
/// for models without those states.
struct StateBands {
  std::vector<Band> sigma;
  std::vector<Band> n_f;
  std::vector<Band> p_star;
};

StateBands smoothed_states(const Model& model, std::span<const ChainOutput> chains, std::size_t max_draws = 0);

/// Pooled constrained draws (full dimension) from non-failed chains, thinned
/// evenly to at most `max_draws` rows when max_draws > 0.
std::vector<std::vector<double>> pooled_draws(std::span<const ChainOutput> chains, std::size_t max_draws = 0);

}  // namespace econofit
