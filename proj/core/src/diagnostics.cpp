#include "econofit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace econofit {
namespace {

ChainSeries split_halves(std::span<const std::vector<double>> chains) {
  ChainSeries halves;
  for (const auto& c : chains) {
    const std::size_t n = c.size() / 2;
    halves.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n));
    halves.emplace_back(c.end() - static_cast<std::ptrdiff_t>(n), c.end());
  }
  return halves;
}

double mean_of(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance_of(const std::vector<double>& x, double mean) {
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}

struct Moments {
  std::vector<double> means;
  double within = 0.0;    // W
  double var_plus = 0.0;  // (n-1)/n W + B/n
  std::size_t n = 0;
};

std::optional<Moments> chain_moments(const ChainSeries& halves) {
  if (halves.size() < 2) return std::nullopt;
  const std::size_t n = halves.front().size();
  if (n < 4) return std::nullopt;
  for (const auto& h : halves)
    if (h.size() != n) throw std::invalid_argument("chains must have equal length");
  Moments m;
  m.n = n;
  for (const auto& h : halves) {
    const double mu = mean_of(h);
    m.means.push_back(mu);
    m.within += variance_of(h, mu);
  }
  m.within /= static_cast<double>(halves.size());
  const double grand = mean_of(m.means);
  const double b_over_n = variance_of(m.means, grand);
  const double nd = static_cast<double>(n);
  m.var_plus = (nd - 1.0) / nd * m.within + b_over_n;
  if (!(m.within > 0.0) || !std::isfinite(m.within)) return std::nullopt;
  return m;
}

}  // namespace

std::optional<double> split_rhat(std::span<const std::vector<double>> chains) {
  const auto m = chain_moments(split_halves(chains));
  if (!m) return std::nullopt;
  return std::sqrt(m->var_plus / m->within);
}

std::optional<double> ess(std::span<const std::vector<double>> chains) {
  const ChainSeries halves = split_halves(chains);
  const auto m = chain_moments(halves);
  if (!m) return std::nullopt;
  const std::size_t n = m->n;
  const double nd = static_cast<double>(n);
  const double chains_d = static_cast<double>(halves.size());

  auto mean_autocov = [&](std::size_t lag) {
    double total = 0.0;
    for (std::size_t c = 0; c < halves.size(); ++c) {
      const auto& x = halves[c];
      const double mu = m->means[c];
      double s = 0.0;
      for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - mu) * (x[i + lag] - mu);
      total += s / nd;
    }
    return total / chains_d;
  };
  auto rho = [&](std::size_t lag) { return 1.0 - (m->within - mean_autocov(lag)) / m->var_plus; };

  double prev_pair = 1.0 + rho(1);
  double sum_pairs = prev_pair;
  for (std::size_t k = 1; 2 * k + 1 < n; ++k) {
    double pair = rho(2 * k) + rho(2 * k + 1);
    if (pair < 0.0) break;
    pair = std::min(pair, prev_pair);
    sum_pairs += pair;
    prev_pair = pair;
  }
  const double total = chains_d * nd;
  const double tau = std::max(-1.0 + 2.0 * sum_pairs, 1.0 / std::log10(total));
  return total / tau;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

bool multimodality_signature(std::span<const std::vector<double>> chains) {
  if (chains.size() < 2) return false;
  const auto overall = split_rhat(chains);
  if (!overall || !(*overall > kMultimodalRhat)) return false;
  for (const auto& c : chains) {
    const auto self = split_rhat(std::span<const std::vector<double>>(&c, 1));
    if (!self || !(*self < kWithinChainRhat)) return false;
  }
  return true;
}

ChainSeries parameter_series(std::span<const ChainOutput> chains, std::size_t col, std::size_t skip) {
  ChainSeries out;
  for (const auto& c : chains) {
    if (c.failed) continue;
    auto column = c.column(col);
    if (skip >= column.size()) continue;
    out.emplace_back(column.begin() + static_cast<std::ptrdiff_t>(skip), column.end());
  }
  return out;
}

RunReport summarize(std::span<const ChainOutput> chains, std::span<const std::string> names, int max_tree_depth) {
  RunReport report;
  for (const auto& c : chains) {
    if (c.failed) {
      ++report.failed_chains;
      report.notes.push_back("chain " + std::to_string(c.chain) + " failed: " + c.error);
      continue;
    }
    ++report.chains_used;
    report.total_draws += c.num_draws();
    for (const auto& s : c.stats) {
      if (s.divergent) ++report.divergences;
      if (s.tree_depth >= max_tree_depth) ++report.tree_depth_saturations;
    }
  }
  if (report.chains_used < 2)
    report.notes.push_back("fewer than two usable chains: multimodality check not performed");

  for (std::size_t col = 0; col < names.size(); ++col) {
    const ChainSeries series = parameter_series(chains, col);
    std::vector<double> pooled;
    for (const auto& s : series) pooled.insert(pooled.end(), s.begin(), s.end());
    SummaryRow row;
    row.name = names[col];
    if (!pooled.empty()) {
      row.mean = mean_of(pooled);
      row.sd = pooled.size() > 1 ? std::sqrt(variance_of(pooled, row.mean)) : 0.0;
      row.q025 = quantile(pooled, 0.025);
      row.q50 = quantile(pooled, 0.5);
      row.q975 = quantile(pooled, 0.975);
      row.rhat = split_rhat(series);
      row.ess = ess(series);
      if (row.ess) row.ess = std::min(*row.ess, 1.5 * static_cast<double>(pooled.size()));
    }
    if (report.chains_used >= 2 && multimodality_signature(series)) {
      report.multimodal = true;
      report.multimodal_parameters.push_back(row.name);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace econofit
