#include "econofit/franke_westerhoff.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace econofit {
namespace {

struct FwState {
  double p_prev;
  double p;
  double p_star;
  double attract_prev;  // a_{t-1}
};

// Forward quantities of one likelihood step kept for the reverse pass.
struct FwStep {
  double n_f;
  double gap;    // p*_t - p_t
  double trend;  // p_t - p_{t-1}
  double d_mean;
  double d_var;
};

}  // namespace

FwModel::FwModel(Mode mode, std::optional<PriceSeries> data, const ModelOptions& options)
    : ModelBase(mode == Mode::kFixed ? ModelKind::kFwFixed : ModelKind::kFwRandomWalk, std::move(data)),
      mode_(mode),
      p_star_(options.p_star) {
  std::vector<Constraint> c{Constraint::lower_bounded(0.0), Constraint::lower_bounded(0.0),
                            Constraint::lower_bounded(0.0), Constraint::lower_bounded(0.0),
                            Constraint::unbounded(),      Constraint::lower_bounded(0.0),
                            Constraint::lower_bounded(0.0)};
  std::vector<std::string> names{"phi", "xi", "sigma_f", "sigma_c", "alpha_0", "alpha_n", "alpha_p"};
  std::size_t structural = 7;
  if (mode_ == Mode::kRandomWalk) {
    c.push_back(Constraint::lower_bounded(0.0));
    names.emplace_back("sigma_star");
    structural = 8;
    if (data_) {
      for (std::size_t t = 0; t < data_->size(); ++t) {
        c.push_back(Constraint::unbounded());
        names.push_back("eps_star[" + std::to_string(t + 1) + "]");
      }
    }
  }
  set_parameters(TransformSpec(std::move(c), std::move(names)), structural, options);
}

double FwModel::loglik_gradient(std::span<const double> theta, std::span<double> dtheta) const {
  const FwRecursion<double> rec{theta[0], theta[1], theta[2], theta[3], theta[4], theta[5], theta[6]};
  const auto& p = data_->log_prices();
  const std::size_t n = p.size();
  const bool rw = mode_ == Mode::kRandomWalk;
  const double sigma_star = rw ? theta[7] : 0.0;

  std::vector<FwStep> steps(n);
  std::vector<double> walk(rw ? n : 0);  // sum_{k<=t} eps_k
  double cumulative = rw ? theta[8] : 0.0;
  double total = 0.0;
  double attract = 0.0;
  for (std::size_t t = 1; t + 1 < n; ++t) {
    if (rw) {
      cumulative += theta[8 + t];
      walk[t] = cumulative;
    }
    const double p_star = rw ? p[0] + sigma_star * cumulative : p_star_;
    const auto frac = FwRecursion<double>::fractions(attract);
    const auto m = rec.moments(frac, p_star, p[t], p[t - 1]);
    const double e = p[t + 1] - p[t] - m.mean;
    total += math::normal_lpdf_var(p[t + 1] - p[t], m.mean, m.variance);
    steps[t] = {frac.fundamentalist, p_star - p[t], p[t] - p[t - 1], e / m.variance,
                0.5 * (e * e / m.variance - 1.0) / m.variance};
    attract = rec.attractiveness(frac, p_star, p[t]);
  }

  constexpr double mu = kFwMu;
  constexpr double mu2 = kFwMu * kFwMu;
  double g[7] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  std::vector<double> d_p_star(rw ? n : 0, 0.0);
  double d_attract = 0.0;  // d loglik / d a_t, flowing back from later steps
  for (std::size_t t = n - 2; t >= 1; --t) {
    const FwStep& s = steps[t];
    const double nf = s.n_f;
    const double nc = 1.0 - nf;
    const double d_nf = s.d_mean * mu * (rec.phi * s.gap - rec.xi * s.trend) +
                        s.d_var * mu2 * 2.0 * (nf * rec.sigma_f * rec.sigma_f - nc * rec.sigma_c * rec.sigma_c) +
                        d_attract * 2.0 * rec.alpha_n;
    if (rw) d_p_star[t] = s.d_mean * mu * nf * rec.phi + d_attract * 2.0 * rec.alpha_p * s.gap;
    g[0] += s.d_mean * mu * nf * s.gap;
    g[1] += s.d_mean * mu * nc * s.trend;
    g[2] += s.d_var * mu2 * 2.0 * nf * nf * rec.sigma_f;
    g[3] += s.d_var * mu2 * 2.0 * nc * nc * rec.sigma_c;
    g[4] += d_attract;
    g[5] += d_attract * (nf - nc);
    g[6] += d_attract * s.gap * s.gap;
    d_attract = d_nf * kFwBeta * nf * nc;
    if (t == 1) break;
  }
  for (int i = 0; i < 7; ++i) dtheta[i] += g[i];

  if (rw) {
    double suffix = 0.0;
    double d_sigma = 0.0;
    for (std::size_t k = n - 1; k + 1 > 0; --k) {
      suffix += d_p_star[k];
      d_sigma += d_p_star[k] * walk[k];
      dtheta[8 + k] += sigma_star * suffix;
    }
    dtheta[7] += d_sigma;
  }
  return total;
}

LatentPath FwModel::latent_path(std::span<const double> theta) const {
  const auto& p = data().log_prices();
  const std::size_t n = p.size();
  const FwRecursion<double> rec{theta[0], theta[1], theta[2], theta[3], theta[4], theta[5], theta[6]};
  LatentPath path;
  path.sigma.resize(n);
  path.n_f.resize(n);
  path.p_star.resize(n);

  double p_star = p_star_;
  double attract = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (mode_ == Mode::kRandomWalk) p_star = (t == 0 ? p[0] : p_star) + theta[7] * theta[8 + t];
    const auto frac = FwRecursion<double>::fractions(t == 0 ? 0.0 : attract);
    const auto m = rec.moments(frac, p_star, p[t], t == 0 ? p[0] : p[t - 1]);
    path.sigma[t] = std::sqrt(m.variance);
    path.n_f[t] = frac.fundamentalist;
    path.p_star[t] = p_star;
    attract = t == 0 ? 0.0 : rec.attractiveness(frac, p_star, p[t]);
  }
  return path;
}

SimulatedPath FwModel::simulate(std::span<const double> structural, std::size_t T, std::span<const double> init,
                                Rng& rng) const {
  if (T < 3) throw std::invalid_argument("simulate: T must be at least 3");
  check_structural(structural);
  const FwRecursion<double> rec{structural[0], structural[1], structural[2], structural[3],
                                structural[4], structural[5], structural[6]};
  const double sigma_star = mode_ == Mode::kRandomWalk ? structural[7] : 0.0;
  std::normal_distribution<double> z(0.0, 1.0);

  SimulatedPath out;
  out.log_prices.resize(T);
  out.latent.sigma.resize(T);
  out.latent.n_f.resize(T);
  out.latent.p_star.resize(T);
  out.log_prices[0] = init.empty() ? 0.0 : init[0];
  const bool second_given = init.size() >= 2;
  if (second_given) out.log_prices[1] = init[1];

  double p_star = mode_ == Mode::kRandomWalk ? out.log_prices[0] : p_star_;
  double attract = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const double p = out.log_prices[t];
    const double p_prev = t == 0 ? p : out.log_prices[t - 1];
    if (mode_ == Mode::kRandomWalk) p_star += sigma_star * z(rng);
    const auto frac = FwRecursion<double>::fractions(t == 0 ? 0.0 : attract);
    const auto m = rec.moments(frac, p_star, p, p_prev);
    out.latent.sigma[t] = std::sqrt(m.variance);
    out.latent.n_f[t] = frac.fundamentalist;
    out.latent.p_star[t] = p_star;
    attract = t == 0 ? 0.0 : rec.attractiveness(frac, p_star, p);
    if (t + 1 < T && !(t == 0 && second_given)) out.log_prices[t + 1] = p + m.mean + out.latent.sigma[t] * z(rng);
  }
  return out;
}

ForecastPath FwModel::forecast(std::span<const double> theta, std::size_t horizon, Rng& rng) const {
  const auto& p = data().log_prices();
  const std::size_t n = p.size();
  const FwRecursion<double> rec{theta[0], theta[1], theta[2], theta[3], theta[4], theta[5], theta[6]};
  const double sigma_star = mode_ == Mode::kRandomWalk ? theta[7] : 0.0;

  // Terminal state: p*_{N-1} and the attractiveness a_{N-2} feeding n^f_{N-1}.
  const LatentPath path = latent_path(theta);
  const double nf = path.n_f[n - 2];
  const typename FwRecursion<double>::Fractions prev{nf, 1.0 - nf};
  FwState s{p[n - 2], p[n - 1], path.p_star[n - 1], rec.attractiveness(prev, path.p_star[n - 2], p[n - 2])};

  std::normal_distribution<double> z(0.0, 1.0);
  ForecastPath out;
  for (std::size_t h = 0; h < horizon; ++h) {
    if (h > 0 && mode_ == Mode::kRandomWalk) s.p_star += sigma_star * z(rng);
    const auto frac = FwRecursion<double>::fractions(s.attract_prev);
    const auto m = rec.moments(frac, s.p_star, s.p, s.p_prev);
    const double sd = std::sqrt(m.variance);
    const double r = m.mean + sd * z(rng);
    out.returns.push_back(r);
    out.sigma.push_back(sd);
    out.log_prices.push_back(s.p + r);
    s.attract_prev = rec.attractiveness(frac, s.p_star, s.p);
    s.p_prev = s.p;
    s.p += r;
  }
  return out;
}

}  // namespace econofit
