#include <cmath>
#include <numeric>

#include "doctest.h"
#include "econofit/forecast.hpp"
#include "fixtures.hpp"

using namespace econofit;
using namespace econofit::testing;

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double mean_sigma_band_width(const StateBands& bands) {
  double w = 0.0;
  for (const auto& b : bands.sigma) w += b.upper - b.lower;
  return w / static_cast<double>(bands.sigma.size());
}

HmcConfig config(std::uint64_t seed) {
  HmcConfig c;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("fw-states") {
  TEST_CASE("fixed fundamental fit: calibrated fan and recovered fractions") {
    const auto generator = make_model(ModelKind::kFwFixed, std::nullopt);
    Rng sim_rng(2024);
    const SimulatedPath truth = generator->simulate(fw_reference(), 1500, {}, sim_rng);
    const PriceSeries data(truth.log_prices);
    const auto model = make_model(ModelKind::kFwFixed, data);
    const auto chains = run_chains(*model, config(5));
    for (const auto& c : chains) REQUIRE_FALSE(c.failed);

    const StateBands bands = smoothed_states(*model, chains);
    std::vector<double> estimated, actual;
    for (std::size_t t = 2; t < data.size(); ++t) {
      estimated.push_back(bands.n_f[t].mean);
      actual.push_back(truth.latent.n_f[t]);
    }
    const double r = pearson(estimated, actual);
    CAPTURE(r);
    CHECK(r > 0.5);

    const std::size_t horizon = 20;
    Rng fan_rng(6);
    const ForecastFan fan = posterior_predictive(*model, chains, horizon, fan_rng);
    Rng future_rng(7);
    int inside = 0, total = 0;
    for (int k = 0; k < 100; ++k) {
      const ForecastPath future = model->forecast(fw_reference(), horizon, future_rng);
      for (std::size_t h = 0; h < horizon; ++h) {
        inside += future.returns[h] >= fan.returns[h][0] && future.returns[h] <= fan.returns[h][4];
        ++total;
      }
    }
    const double coverage = static_cast<double>(inside) / total;
    CAPTURE(coverage);
    CHECK(coverage >= 0.88);
    CHECK(coverage <= 0.99);
  }

  TEST_CASE("random walk fundamental widens the volatility band") {
    const auto data = simulate_series(ModelKind::kFwFixed, fw_reference(), 300, 31);
    const auto fixed = make_model(ModelKind::kFwFixed, data);
    const auto walk = make_model(ModelKind::kFwRandomWalk, data);
    const auto fixed_chains = run_chains(*fixed, config(8));
    const auto walk_chains = run_chains(*walk, config(9));
    const double fixed_width = mean_sigma_band_width(smoothed_states(*fixed, fixed_chains));
    const double walk_width = mean_sigma_band_width(smoothed_states(*walk, walk_chains));
    CAPTURE(fixed_width);
    CAPTURE(walk_width);
    CHECK(walk_width >= fixed_width);
  }
}
