#include "econofit/forecast.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "econofit/diagnostics.hpp"

namespace econofit {
namespace {

FanQuantiles fan_quantiles(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  FanQuantiles q{};
  const double last = static_cast<double>(values.size()) - 1.0;
  for (std::size_t l = 0; l < kFanLevels.size(); ++l) {
    const double h = last * kFanLevels[l];
    const auto lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    q[l] = values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  }
  return q;
}

std::vector<Band> bands_of(const std::vector<std::vector<double>>& per_draw) {
  if (per_draw.empty() || per_draw.front().empty()) return {};
  const std::size_t len = per_draw.front().size();
  std::vector<Band> out(len);
  std::vector<double> column(per_draw.size());
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0;
    for (std::size_t d = 0; d < per_draw.size(); ++d) {
      column[d] = per_draw[d][t];
      sum += column[d];
    }
    out[t].mean = sum / static_cast<double>(column.size());
    out[t].lower = quantile(column, 0.025);
    out[t].upper = quantile(column, 0.975);
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> pooled_draws(std::span<const ChainOutput> chains, std::size_t max_draws) {
  std::vector<std::vector<double>> all;
  for (const auto& c : chains) {
    if (c.failed) continue;
    for (std::size_t r = 0; r < c.num_draws(); ++r) {
      const auto row = c.row(r);
      all.emplace_back(row.begin(), row.end());
    }
  }
  if (max_draws == 0 || all.size() <= max_draws) return all;
  std::vector<std::vector<double>> thinned;
  thinned.reserve(max_draws);
  for (std::size_t i = 0; i < max_draws; ++i) thinned.push_back(std::move(all[i * all.size() / max_draws]));
  return thinned;
}

ForecastFan posterior_predictive(const Model& model, std::span<const ChainOutput> chains, std::size_t horizon,
                                 Rng& rng, std::size_t max_draws) {
  if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
  const auto draws = pooled_draws(chains, max_draws);
  if (draws.size() < kMinForecastDraws)
    throw std::invalid_argument("posterior predictive needs at least " + std::to_string(kMinForecastDraws) +
                                " draws, got " + std::to_string(draws.size()));

  std::vector<ForecastPath> paths;
  paths.reserve(draws.size());
  for (const auto& theta : draws) paths.push_back(model.forecast(theta, horizon, rng));

  ForecastFan fan;
  fan.horizon = horizon;
  fan.draws_used = draws.size();
  std::vector<double> r(draws.size()), p(draws.size()), s(draws.size());
  for (std::size_t h = 0; h < horizon; ++h) {
    for (std::size_t d = 0; d < paths.size(); ++d) {
      r[d] = paths[d].returns[h];
      p[d] = paths[d].log_prices[h];
      s[d] = paths[d].sigma[h];
    }
    fan.returns.push_back(fan_quantiles(r));
    fan.log_prices.push_back(fan_quantiles(p));
    fan.sigma.push_back(fan_quantiles(s));
  }
  return fan;
}

std::vector<PriorSeries> prior_predictive(const Model& model, std::size_t n_series, std::size_t T, Rng& rng,
                                          std::span<const double> init) {
  std::vector<PriorSeries> out;
  out.reserve(n_series);
  for (std::size_t i = 0; i < n_series; ++i) {
    PriorSeries s;
    s.structural = model.sample_prior(rng);
    s.path = model.simulate(s.structural, T, init, rng);
    out.push_back(std::move(s));
  }
  return out;
}

StateBands smoothed_states(const Model& model, std::span<const ChainOutput> chains, std::size_t max_draws) {
  const auto draws = pooled_draws(chains, max_draws);
  if (draws.empty()) throw std::invalid_argument("smoothed states need at least one draw");
  std::vector<std::vector<double>> sigma, n_f, p_star;
  for (const auto& theta : draws) {
    LatentPath path = model.latent_path(theta);
    sigma.push_back(std::move(path.sigma));
    if (!path.n_f.empty()) n_f.push_back(std::move(path.n_f));
    if (!path.p_star.empty()) p_star.push_back(std::move(path.p_star));
  }
  return StateBands{bands_of(sigma), bands_of(n_f), bands_of(p_star)};
}

}  // namespace econofit
