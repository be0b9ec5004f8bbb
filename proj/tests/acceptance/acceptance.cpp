// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "econofit/cli/commands.hpp"
#include "econofit/diagnostics.hpp"
#include "econofit/sampler.hpp"
#include "econofit/vikram_sinha.hpp"
#include "fixtures.hpp"
#include "targets.hpp"

using namespace econofit;
using namespace econofit::testing;

namespace {

constexpr int kSeeds = 10;
constexpr std::size_t kSeriesLength = 2000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double column_mean(const ChainSeries& s) {
  const auto x = pooled_column(s);
  return sample_mean(x);
}

/// Fits of one model to the shared FW-simulated series of each seed.
struct SeedFit {
  PriceSeries data;
  std::unique_ptr<Model> model;
  std::vector<ChainOutput> chains;
  RunReport report;
};

std::vector<PriceSeries> fw_series() {
  std::vector<PriceSeries> out;
  for (int s = 1; s <= kSeeds; ++s) out.push_back(simulate_series(ModelKind::kFwFixed, fw_reference(), kSeriesLength, s));
  return out;
}

std::vector<SeedFit> fit_all(ModelKind kind, const std::vector<PriceSeries>& series, std::uint64_t seed_offset) {
  std::vector<SeedFit> fits;
  for (std::size_t i = 0; i < series.size(); ++i) {
    SeedFit f{series[i], make_model(kind, series[i]), {}, {}};
    HmcConfig config;
    config.seed = seed_offset + i + 1;
    f.chains = run_chains(*f.model, config);
    f.report = summarize(f.chains, f.model->transform().names(), config.max_tree_depth);
    fits.push_back(std::move(f));
  }
  return fits;
}

// Mean of per-seed posterior means against target +- half width for each
// named parameter.
Outcome recovery(const std::vector<SeedFit>& fits, const std::vector<std::tuple<std::string, double, double>>& table) {
  Outcome o{true, ""};
  for (const auto& [name, mean, width] : table) {
    double avg = 0.0;
    for (const auto& f : fits) {
      const auto it = std::find_if(f.report.rows.begin(), f.report.rows.end(),
                                   [&](const SummaryRow& r) { return r.name == name; });
      avg += it->mean;
    }
    avg /= static_cast<double>(fits.size());
    const bool ok = std::abs(avg - mean) <= width;
    o.pass = o.pass && ok;
    o.detail += fmt("%s %.4g in [%.4g, %.4g]%s; ", name.c_str(), avg, mean - width, mean + width, ok ? "" : " (out)");
  }
  return o;
}

Outcome criterion_fw_recovery(const std::vector<SeedFit>& fits) {
  return recovery(fits, {{"phi", 0.23, 3 * 0.23},
                         {"xi", 0.97, 3 * 0.18},
                         {"sigma_f", 0.75, 3 * 0.056},
                         {"sigma_c", 2.14, 3 * 0.19},
                         {"alpha_0", -0.28, 3 * 0.14},
                         {"alpha_n", 1.83, 3 * 0.22},
                         {"alpha_p", 16.9, 3 * 6.0}});
}

Outcome criterion_vs_recovery() {
  const std::vector<double> truth{100.0, 0.999, 0.01};
  std::vector<PriceSeries> series;
  for (int s = 1; s <= kSeeds; ++s) series.push_back(simulate_series(ModelKind::kVs, truth, kSeriesLength, 100 + s));
  const auto fits = fit_all(ModelKind::kVs, series, 200);
  return recovery(fits, {{"mu", 95.9, 35.7}, {"tau", 0.997, 0.0234}, {"sigma_max", 0.011, 0.012}});
}

Outcome criterion_convergence(const std::vector<SeedFit>& fits) {
  Outcome o{true, ""};
  int rhat_bad = 0, shift_bad = 0;
  double worst_rhat = 0.0, worst_shift = 0.0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& f = fits[i];
    double seed_rhat = 0.0, seed_shift = 0.0;
    for (std::size_t p = 0; p < f.report.rows.size(); ++p) {
      const auto& row = f.report.rows[p];
      seed_rhat = std::max(seed_rhat, row.rhat.value_or(INFINITY));
      const double trimmed = column_mean(parameter_series(f.chains, p, 50));
      seed_shift = std::max(seed_shift, std::abs(trimmed - row.mean) / row.sd);
    }
    rhat_bad += seed_rhat >= 1.05;
    shift_bad += seed_shift >= 0.5;
    worst_rhat = std::max(worst_rhat, seed_rhat);
    worst_shift = std::max(worst_shift, seed_shift);
    o.detail += fmt("seed %zu rhat %.3f shift %.2f; ", i + 1, seed_rhat, seed_shift);
  }
  o.pass = rhat_bad == 0 && shift_bad == 0;
  o.detail = fmt("%d seeds with rhat >= 1.05 (worst %.3f), %d with shift >= 0.5 sd (worst %.2f): ", rhat_bad,
                 worst_rhat, shift_bad, worst_shift) +
             o.detail;
  return o;
}

Outcome criterion_gradients() {
  const std::vector<std::tuple<ModelKind, std::vector<double>, std::size_t>> cases{
      {ModelKind::kGarch, {1e-5, 0.1, 0.8, 0.01}, 200},
      {ModelKind::kVs, {100.0, 0.999, 0.01}, 200},
      {ModelKind::kFwFixed, fw_reference(), 200},
      {ModelKind::kFwRandomWalk, [] { auto v = fw_reference(); v.push_back(0.01); return v; }(), 60}};
  Outcome o{true, ""};
  for (const auto& [kind, truth, n] : cases) {
    const auto model = make_model(kind, simulate_series(kind, truth, n, 41));
    Rng rng(42);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const auto u = prior_point(*model, rng);
      std::vector<double> grad(u.size());
      model->log_density(u, grad);
      const auto fd = numeric_gradient([&](const std::vector<double>& x) { return model->log_density_value(x); }, u);
      for (std::size_t i = 0; i < u.size(); ++i)
        worst = std::max(worst, std::abs(grad[i] - fd[i]) / std::max({1.0, std::abs(grad[i]), std::abs(fd[i])}));
    }
    o.pass = o.pass && worst <= 1e-5;
    o.detail += fmt("%s %.1e; ", std::string(to_string(kind)).c_str(), worst);
  }
  return o;
}

PhasePoint point_at(const DensityTarget& target, std::vector<double> theta, std::vector<double> momentum) {
  PhasePoint z;
  z.theta = std::move(theta);
  z.momentum = std::move(momentum);
  evaluate(target, z);
  return z;
}

Outcome criterion_sampler() {
  bool ok = true;
  std::string detail;

  const DiagonalGaussian normal10(std::vector<double>(10, 1.0));
  HmcConfig config;
  config.seed = 20;
  const auto chains = run_chains(normal10, TransformSpec::all_unbounded(10), config);
  double worst_mean = 0.0, min_var = INFINITY, max_var = 0.0;
  for (std::size_t d = 0; d < 10; ++d) {
    const auto x = pooled_column(parameter_series(chains, d));
    worst_mean = std::max(worst_mean, std::abs(sample_mean(x)));
    const double v = sample_variance(x);
    min_var = std::min(min_var, v);
    max_var = std::max(max_var, v);
  }
  ok = ok && worst_mean <= 0.15 && min_var >= 0.8 && max_var <= 1.2;
  detail += fmt("10-d normal |mean| <= %.3f, var in [%.3f, %.3f]; ", worst_mean, min_var, max_var);

  const CorrelatedGaussian corr(0.9);
  config.seed = 21;
  const auto cchains = run_chains(corr, TransformSpec::all_unbounded(2), config);
  const auto x = pooled_column(parameter_series(cchains, 0));
  const auto y = pooled_column(parameter_series(cchains, 1));
  const double mx = sample_mean(x), my = sample_mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double rho = sxy / std::sqrt(sxx * syy);
  ok = ok && std::abs(rho - 0.9) <= 0.1;
  detail += fmt("correlation %.3f; ", rho);

  const DiagonalGaussian target({1.0, 3.0, 0.2, 1.5});
  const std::vector<double> inv_mass{1.0, 4.0, 0.1, 2.0};
  Rng rng(1);
  double worst_rev = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    auto z = point_at(target, uniform_point(4, rng), uniform_point(4, rng));
    const auto start = z;
    for (int s = 0; s < 25; ++s) leapfrog(z, 0.05, inv_mass, target);
    for (double& m : z.momentum) m = -m;
    for (int s = 0; s < 25; ++s) leapfrog(z, 0.05, inv_mass, target);
    for (std::size_t i = 0; i < 4; ++i)
      worst_rev = std::max({worst_rev, std::abs(z.theta[i] - start.theta[i]),
                            std::abs(z.momentum[i] + start.momentum[i])});
  }
  ok = ok && worst_rev <= 1e-10;
  detail += fmt("reversibility %.1e; ", worst_rev);

  const DiagonalGaussian quad({1.0, 2.0, 0.7});
  const std::vector<double> unit{1.0, 1.0, 1.0};
  std::normal_distribution<double> z01(0.0, 1.0);
  Rng erng(2);
  double full = 0.0, half = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> theta(3), momentum(3);
    for (double& v : theta) v = z01(erng);
    for (double& v : momentum) v = z01(erng);
    auto energy_error = [&](double eps) {
      auto z = point_at(quad, theta, momentum);
      const double h0 = joint_log_density(z, unit);
      leapfrog(z, eps, unit, quad);
      return std::abs(joint_log_density(z, unit) - h0);
    };
    full += energy_error(0.2);
    half += energy_error(0.1);
  }
  ok = ok && full / half >= 3.5;
  detail += fmt("energy halving ratio %.2f", full / half);
  return {ok, detail};
}

double log_normal(double x, double mean, double var) {
  return -0.5 * std::log(2 * std::numbers::pi * var) - 0.5 * (x - mean) * (x - mean) / var;
}

Outcome criterion_psis() {
  Rng rng(8);
  std::normal_distribution<double> z(0.0, 1.0);
  const int n = 50;
  std::vector<double> y(n);
  for (double& v : y) v = 1.3 + z(rng);
  double sum = 0.0;
  for (double v : y) sum += v;
  const double prior_prec = 1.0 / 100.0;
  const double post_prec = prior_prec + n;
  const std::size_t draws = 4000;
  LogLikMatrix m{draws, static_cast<std::size_t>(n), {}};
  for (std::size_t s = 0; s < draws; ++s) {
    const double mu = sum / post_prec + z(rng) / std::sqrt(post_prec);
    for (double v : y) m.values.push_back(log_normal(v, mu, 1.0));
  }
  double exact = 0.0;
  for (double v : y) {
    const double prec = prior_prec + (n - 1);
    exact += log_normal(v, (sum - v) / prec, 1.0 + 1.0 / prec);
  }
  const double err = std::abs(psis_loo(m).elpd - exact);
  return {err < 0.5, fmt("exact %.3f, |psis - exact| %.4f", exact, err)};
}

std::map<std::size_t, double> pointwise_by_index(const SeedFit& f) {
  const auto loo = psis_loo(loglik_matrix(*f.model, f.chains));
  const auto idx = f.model->observation_indices();
  std::map<std::size_t, double> out;
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = loo.pointwise[i].elpd;
  return out;
}

Outcome criterion_comparison(const std::vector<SeedFit>& fw, const std::vector<SeedFit>& vs) {
  int wins = 0;
  std::string detail;
  for (std::size_t i = 0; i < fw.size(); ++i) {
    const auto a = pointwise_by_index(fw[i]);
    const auto b = pointwise_by_index(vs[i]);
    std::vector<double> pa, pb;
    for (const auto& [k, v] : a)
      if (const auto it = b.find(k); it != b.end()) {
        pa.push_back(v);
        pb.push_back(it->second);
      }
    const auto d = loo_difference(pa, pb);
    const bool win = d.elpd_diff > 2.0 * d.se;
    wins += win;
    detail += fmt("seed %zu %.1f (se %.1f); ", i + 1, d.elpd_diff, d.se);
  }
  return {wins >= 8, fmt("%d/10 seeds with FW-fixed ahead by > 2 se: ", wins) + detail};
}

Outcome criterion_multimodality() {
  Rng rng(10);
  const std::vector<std::string> names{"theta"};
  auto chain = [&](int index, double mean, double sd) {
    std::normal_distribution<double> z(mean, sd);
    ChainOutput c;
    c.chain = index;
    c.dimension = 1;
    for (int r = 0; r < 400; ++r) c.draws.push_back(z(rng));
    c.stats.resize(400);
    return c;
  };
  std::vector<ChainOutput> split, mixed;
  for (int c = 0; c < 4; ++c) split.push_back(chain(c, c < 2 ? 0.0 : 5.0, 0.1));
  for (int c = 0; c < 4; ++c) mixed.push_back(chain(c, 0.0, 1.0));
  const bool flagged = summarize(split, names, 10).multimodal;
  const bool false_alarm = summarize(mixed, names, 10).multimodal;
  return {flagged && !false_alarm,
          fmt("bimodal fixture flagged: %s, mixed chains flagged: %s", flagged ? "yes" : "no",
              false_alarm ? "yes" : "no")};
}

Outcome criterion_prior_predictive() {
  Rng rng(9);
  const Prior tau = Prior::beta(10.0, 0.5);
  int below = 0;
  const int n = 25000;
  for (int i = 0; i < n; ++i) below += -1.0 / std::log(tau.sample(rng)) < 1.0;
  const double frac = static_cast<double>(below) / n;
  const Prior g = Prior::gamma(3.0, 0.03);
  std::vector<double> draws(n);
  for (double& v : draws) v = g.sample(rng);
  const double lo = quantile(draws, 0.025), hi = quantile(draws, 0.975);
  const bool ok = frac < 0.05 && std::abs(lo - 20.6) <= 2.06 && std::abs(hi - 240.8) <= 24.08;
  return {ok, fmt("time constant below 1: %.2f%%; gamma 95%% interval [%.1f, %.1f]", 100 * frac, lo, hi)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion_determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "econofit-acceptance";
  fs::remove_all(root);
  std::ostringstream log;
  cli::RunConfig sim;
  sim.model = ModelKind::kGarch;
  sim.output_dir = root / "sim";
  sim.seed = 5;
  sim.simulate = cli::SimulateSettings{kSeriesLength, {{"mu", 1e-5}, {"alpha", 0.1}, {"beta", 0.8}, {"sigma1", 0.01}}, {}};
  cli::cmd_simulate(sim, log);
  for (const char* out : {"a", "b"}) {
    cli::RunConfig fit;
    fit.model = ModelKind::kGarch;
    fit.data_path = root / "sim/simulated.csv";
    fit.output_dir = root / out;
    fit.seed = 6;
    fit.sampler.seed = 6;
    cli::cmd_fit(fit, log);
  }
  const auto a = slurp(root / "a/draws.csv");
  const auto b = slurp(root / "b/draws.csv");
  fs::remove_all(root);
  return {!a.empty() && a == b, fmt("draws.csv %zu bytes, identical: %s", a.size(), a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  auto report = [&](int n, const std::function<Outcome()>& run) {
    const auto start = clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    failures += !o.pass;
    std::printf("criterion %d: %s (%.0fs) %s\n", n, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  };

  const auto series = fw_series();
  std::vector<SeedFit> fw, vs;
  report(1, [&] {
    fw = fit_all(ModelKind::kFwFixed, series, 0);
    return criterion_fw_recovery(fw);
  });
  report(2, criterion_vs_recovery);
  report(3, [&] { return criterion_convergence(fw); });
  report(4, criterion_gradients);
  report(5, criterion_sampler);
  report(6, criterion_psis);
  report(7, [&] {
    vs = fit_all(ModelKind::kVs, series, 300);
    return criterion_comparison(fw, vs);
  });
  report(8, criterion_multimodality);
  report(9, criterion_prior_predictive);
  report(10, criterion_determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
