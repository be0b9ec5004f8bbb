#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "econofit/diagnostics.hpp"
#include "econofit/math.hpp"

namespace econofit {
namespace {

constexpr int kMinTail = 5;

// sqrt(n * sample variance) of a pointwise vector.
double total_se(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) return 0.0;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(n * ss / (n - 1.0));
}

}  // namespace

GpdFit fit_gpd(std::vector<double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("GPD fit needs at least 2 exceedances");
  std::sort(x.begin(), x.end());
  const double prior = 3.0;
  const std::size_t m = 30 + static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const double xstar = x[static_cast<std::size_t>(std::floor(static_cast<double>(n) / 4.0 + 0.5)) - 1];
  const double nd = static_cast<double>(n);
  // Exceedances that underflowed to zero leave no scale to fit.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (!(xstar > 0.0)) return {kInf, std::numeric_limits<double>::quiet_NaN()};

  std::vector<double> theta(m), log_lik(m);
  for (std::size_t j = 0; j < m; ++j) {
    theta[j] = 1.0 / x.back() + (1.0 - std::sqrt(static_cast<double>(m) / (static_cast<double>(j) + 0.5))) / prior / xstar;
    double k = 0.0;
    for (double v : x) k += std::log1p(-theta[j] * v);
    k /= nd;
    log_lik[j] = nd * (std::log(-theta[j] / k) - k - 1.0);
  }
  const double lse = math::log_sum_exp(log_lik);
  double theta_hat = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double w = std::exp(log_lik[j] - lse);
    if (std::isfinite(w)) theta_hat += theta[j] * w;
  }
  double k = 0.0;
  for (double v : x) k += std::log1p(-theta_hat * v);
  k /= nd;
  const double sigma = -k / theta_hat;
  // Weak shrinkage toward 0.5 for small tails.
  k = k * nd / (nd + 10.0) + 10.0 * 0.5 / (nd + 10.0);
  if (std::isnan(k) || !(sigma > 0.0) || !std::isfinite(sigma)) k = kInf;
  return {k, sigma};
}

double gpd_quantile(double p, double k, double sigma) {
  if (k == 0.0) return -sigma * std::log1p(-p);
  return sigma * std::expm1(-k * std::log1p(-p)) / k;
}

PsisWeights psis_smooth(std::span<const double> log_ratios) {
  const std::size_t s = log_ratios.size();
  if (s < 2) throw std::invalid_argument("PSIS needs at least 2 draws");
  PsisWeights out;
  out.log_weights.assign(log_ratios.begin(), log_ratios.end());
  auto& lw = out.log_weights;
  const double max_lw = *std::max_element(lw.begin(), lw.end());
  for (double& v : lw) v -= max_lw;

  const double sd = static_cast<double>(s);
  const auto tail_len = static_cast<std::size_t>(std::ceil(std::min(0.2 * sd, 3.0 * std::sqrt(sd))));
  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lw[a] < lw[b]; });

  bool smoothed = false;
  if (tail_len < s) {
    const double cutoff = lw[order[s - tail_len - 1]];
    const double exp_cutoff = std::exp(cutoff);
    std::vector<double> exceed;
    exceed.reserve(tail_len);
    int above = 0;
    for (std::size_t i = s - tail_len; i < s; ++i) {
      exceed.push_back(std::exp(lw[order[i]]) - exp_cutoff);
      if (lw[order[i]] > cutoff) ++above;
    }
    if (above >= kMinTail) {
      const GpdFit fit = fit_gpd(exceed);
      out.pareto_k = fit.k;
      if (std::isfinite(fit.k)) {
        for (std::size_t i = 0; i < tail_len; ++i) {
          const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(tail_len);
          lw[order[s - tail_len + i]] = std::log(gpd_quantile(p, fit.k, fit.sigma) + exp_cutoff);
        }
        for (double& v : lw) v = std::min(v, 0.0);
        smoothed = true;
      }
    }
  }
  if (!smoothed) out.pareto_k = std::numeric_limits<double>::infinity();

  const double norm = math::log_sum_exp(lw);
  for (double& v : lw) v -= norm;
  return out;
}

LooResult psis_loo(const LogLikMatrix& loglik) {
  if (loglik.draws < 100)
    throw std::invalid_argument("PSIS-LOO needs at least 100 posterior draws, got " + std::to_string(loglik.draws));
  if (loglik.observations == 0) throw std::invalid_argument("log-likelihood matrix has no observations");
  if (loglik.values.size() != loglik.draws * loglik.observations)
    throw std::invalid_argument("log-likelihood matrix has inconsistent size");

  LooResult result;
  result.pointwise.resize(loglik.observations);
  std::vector<double> column(loglik.draws), neg(loglik.draws);
  for (std::size_t i = 0; i < loglik.observations; ++i) {
    for (std::size_t s = 0; s < loglik.draws; ++s) {
      column[s] = loglik(s, i);
      if (!std::isfinite(column[s]))
        throw std::invalid_argument("log-likelihood of observation " + std::to_string(i) +
                                    " is not finite in draw " + std::to_string(s));
      neg[s] = -column[s];
    }
    const PsisWeights w = psis_smooth(neg);
    for (std::size_t s = 0; s < loglik.draws; ++s) column[s] += w.log_weights[s];
    result.pointwise[i] = {math::log_sum_exp(column), w.pareto_k};
    if (w.pareto_k > kParetoKBad)
      ++result.n_high_k;
    else if (w.pareto_k > kParetoKWarn)
      ++result.n_warn_k;
  }

  std::vector<double> elpd(result.pointwise.size());
  for (std::size_t i = 0; i < elpd.size(); ++i) elpd[i] = result.pointwise[i].elpd;
  result.elpd = std::accumulate(elpd.begin(), elpd.end(), 0.0);
  result.se = total_se(elpd);
  return result;
}

LogLikMatrix loglik_matrix(const Model& model, std::span<const ChainOutput> chains) {
  LogLikMatrix out;
  out.observations = model.observation_indices().size();
  for (const auto& c : chains) {
    if (c.failed) continue;
    const std::size_t d = c.dimension;
    for (std::size_t r = 0; r < c.num_draws(); ++r) {
      const auto row = model.pointwise_loglik(std::span<const double>(c.unconstrained_draws.data() + r * d, d));
      out.values.insert(out.values.end(), row.begin(), row.end());
      ++out.draws;
    }
  }
  return out;
}

LooDifference loo_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("observation mismatch: pointwise vectors differ in length");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return {std::accumulate(d.begin(), d.end(), 0.0), total_se(d)};
}

}  // namespace econofit
