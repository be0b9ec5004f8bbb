#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "econofit/sampler.hpp"

namespace econofit {

/// Draws of one parameter, one vector per chain.
using ChainSeries = std::vector<std::vector<double>>;

/// Split R-hat: every chain is cut in half and the potential scale reduction
/// sqrt((W (n-1)/n + B/n) / W) is computed over the halves. Undefined when
/// the within-half variance vanishes.
std::optional<double> split_rhat(std::span<const std::vector<double>> chains);

/// Effective sample size over split chains with autocorrelations combined
/// across chains and truncated by Geyer's initial monotone sequence.
std::optional<double> ess(std::span<const std::vector<double>> chains);

/// Type-7 (linear interpolation) sample quantile.
double quantile(std::vector<double> values, double p);

struct GpdFit {
  double k = 0.0;
  double sigma = 0.0;
};

/// Generalized Pareto fit to positive exceedances (grid of profile-likelihood
/// values, weakly regularised toward k = 0.5).
GpdFit fit_gpd(std::vector<double> exceedances);

double gpd_quantile(double p, double k, double sigma);

inline constexpr double kParetoKWarn = 0.5;
inline constexpr double kParetoKBad = 0.7;

struct PsisWeights {
  std::vector<double> log_weights;  // normalised
  double pareto_k = 0.0;            // +inf when the tail was too short to smooth
};

/// Pareto-smoothed importance weights from raw log ratios.
PsisWeights psis_smooth(std::span<const double> log_ratios);

/// Row-major draws x observations matrix of pointwise log-likelihoods.
struct LogLikMatrix {
  std::size_t draws = 0;
  std::size_t observations = 0;
  std::vector<double> values;

  double operator()(std::size_t s, std::size_t i) const { return values[s * observations + i]; }
};

struct PointwiseLoo {
  double elpd = 0.0;
  double pareto_k = 0.0;
};

struct LooResult {
  double elpd = 0.0;
  double se = 0.0;
  std::vector<PointwiseLoo> pointwise;
  int n_high_k = 0;  // k > 0.7
  int n_warn_k = 0;  // 0.5 < k <= 0.7
};

/// PSIS leave-one-out. Requires >= 100 draws and finite entries; throws
/// std::invalid_argument naming the first bad observation otherwise.
LooResult psis_loo(const LogLikMatrix& loglik);

/// Pointwise log-likelihoods of every draw of the non-failed chains, from
/// their unconstrained coordinates.
LogLikMatrix loglik_matrix(const Model& model, std::span<const ChainOutput> chains);

struct LooDifference {
  double elpd_diff = 0.0;  // sum(a - b)
  double se = 0.0;         // sqrt(n var(a - b))
};

/// Paired difference of two aligned pointwise elpd vectors.
LooDifference loo_difference(std::span<const double> a, std::span<const double> b);

struct SummaryRow {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
  std::optional<double> rhat;
  std::optional<double> ess;
};

struct RunReport {
  std::vector<SummaryRow> rows;
  std::size_t total_draws = 0;
  int chains_used = 0;
  int failed_chains = 0;
  int divergences = 0;
  int tree_depth_saturations = 0;
  bool multimodal = false;
  std::vector<std::string> multimodal_parameters;
  std::vector<std::string> notes;
};

inline constexpr double kMultimodalRhat = 1.1;
inline constexpr double kWithinChainRhat = 1.05;

/// True when chains disagree (R-hat > 1.1) although each chain looks
/// stationary on its own (self-split R-hat < 1.05).
bool multimodality_signature(std::span<const std::vector<double>> chains);

/// Per-parameter summaries and the run-level report. Failed chains are
/// skipped and counted.
RunReport summarize(std::span<const ChainOutput> chains, std::span<const std::string> names, int max_tree_depth);

/// Draws of parameter `col` from every non-failed chain.
ChainSeries parameter_series(std::span<const ChainOutput> chains, std::size_t col, std::size_t skip = 0);

}  // namespace econofit
