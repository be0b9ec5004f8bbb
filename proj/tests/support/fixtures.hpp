#pragma once

#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "econofit/franke_westerhoff.hpp"
#include "econofit/model.hpp"

namespace econofit::testing {

inline const FwParams kFwReferenceParams{0.12, 1.5, 0.758, 2.087, -0.327, 1.79, 18.43};

inline std::vector<double> fw_reference() { return kFwReferenceParams.as_vector(); }

/// Prices simulated from a data-free model of the given kind.
inline PriceSeries simulate_series(ModelKind kind, const std::vector<double>& structural, std::size_t T,
                                   std::uint64_t seed, const ModelOptions& options = {}) {
  const auto generator = make_model(kind, std::nullopt, options);
  Rng rng(seed);
  return PriceSeries(generator->simulate(structural, T, {}, rng).log_prices);
}

inline std::vector<double> uniform_point(std::size_t dim, Rng& rng, double radius = 2.0) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<double> x(dim);
  for (double& v : x) v = u(rng);
  return x;
}

/// Unconstrained point whose structural part is a prior draw and whose
/// latent innovations are standard normal.
inline std::vector<double> prior_point(const Model& model, Rng& rng) {
  const auto structural = model.sample_prior(rng);
  auto spec_part = unconstrain(structural, model.transform().prefix(structural.size()));
  std::normal_distribution<double> z(0.0, 1.0);
  while (spec_part.size() < model.dimension()) spec_part.push_back(z(rng));
  return spec_part;
}

}  // namespace econofit::testing
