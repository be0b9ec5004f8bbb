#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "econofit/franke_westerhoff.hpp"
#include "econofit/garch.hpp"
#include "econofit/model.hpp"
#include "econofit/vikram_sinha.hpp"

namespace econofit {

PriceSeries::PriceSeries(std::vector<double> log_prices, std::vector<std::string> dates)
    : log_prices_(std::move(log_prices)), dates_(std::move(dates)) {
  if (log_prices_.size() < kMinLength) {
    throw std::invalid_argument("price series needs at least " + std::to_string(kMinLength) +
                                " observations, got " + std::to_string(log_prices_.size()));
  }
  if (!dates_.empty() && dates_.size() != log_prices_.size())
    throw std::invalid_argument("price series: dates and prices differ in length");
  for (std::size_t i = 0; i < log_prices_.size(); ++i) {
    if (!std::isfinite(log_prices_[i]))
      throw std::invalid_argument("price series: non-finite value at index " + std::to_string(i));
  }
}

std::vector<double> PriceSeries::returns() const {
  std::vector<double> r(log_prices_.size() - 1);
  for (std::size_t i = 0; i + 1 < log_prices_.size(); ++i) r[i] = log_prices_[i + 1] - log_prices_[i];
  return r;
}

double PriceSeries::return_sd() const {
  const auto r = returns();
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
  double ss = 0.0;
  for (double x : r) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(r.size() - 1));
}

std::uint64_t PriceSeries::fingerprint() const {
  // FNV-1a over the IEEE bit patterns.
  std::uint64_t h = 1469598103934665603ULL;
  for (double x : log_prices_) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGarch: return "garch";
    case ModelKind::kVs: return "vs";
    case ModelKind::kFwFixed: return "fw-fixed";
    case ModelKind::kFwRandomWalk: return "fw-rw";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "garch") return ModelKind::kGarch;
  if (name == "vs") return ModelKind::kVs;
  if (name == "fw-fixed") return ModelKind::kFwFixed;
  if (name == "fw-rw") return ModelKind::kFwRandomWalk;
  throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected garch, vs, fw-fixed, fw-rw)");
}

const PriceSeries& Model::data() const {
  if (!data_) throw std::logic_error(std::string(name()) + ": no data attached");
  return *data_;
}

std::vector<std::string> Model::structural_names() const {
  const auto& names = transform_.names();
  return {names.begin(), names.begin() + static_cast<std::ptrdiff_t>(num_structural())};
}

std::vector<std::size_t> Model::observation_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t j = first_return(); j + 1 < data().size(); ++j) idx.push_back(j);
  return idx;
}

std::vector<double> Model::sample_prior(Rng& rng) const {
  std::vector<double> x(num_structural());
  for (std::size_t i = 0; i < x.size(); ++i) {
    // Redraw the boundary values a half-distribution can produce.
    for (int tries = 0;; ++tries) {
      x[i] = priors_[i].sample(rng);
      if (transform_[i].contains_interior(x[i]) || priors_[i].is_point_mass()) break;
      if (tries > 1000) throw std::runtime_error("prior for " + transform_.names()[i] + " violates its constraint");
    }
  }
  return x;
}

void Model::check_structural(std::span<const double> structural) const {
  if (structural.size() != num_structural()) {
    throw std::invalid_argument(std::string(name()) + ": expected " + std::to_string(num_structural()) +
                                " parameters, got " + std::to_string(structural.size()));
  }
  for (std::size_t i = 0; i < structural.size(); ++i) {
    if (!transform_[i].contains_interior(structural[i]))
      throw std::invalid_argument(std::string(name()) + ": parameter " + transform_.names()[i] + " out of range");
  }
}

void Model::set_parameters(TransformSpec spec, std::size_t num_structural, const ModelOptions& options) {
  double sd = data_ ? data_->return_sd() : options.return_sd;
  if (data_ && !(sd > 0.0)) sd = options.return_sd;  // constant prices
  if (!(sd > 0.0) || !std::isfinite(sd)) throw std::invalid_argument("return sd must be positive and finite");
  auto defaults = default_priors(kind_, sd);
  for (const auto& [key, prior] : options.prior_overrides) {
    auto it = defaults.find(key);
    if (it == defaults.end())
      throw std::invalid_argument(std::string(name()) + ": no parameter named '" + key + "' to override");
    it->second = prior;
  }
  priors_.clear();
  for (std::size_t i = 0; i < num_structural; ++i) priors_.push_back(defaults.at(spec.names()[i]));
  transform_ = std::move(spec);
}

std::map<std::string, Prior> default_priors(ModelKind kind, double return_sd) {
  switch (kind) {
    case ModelKind::kGarch:
      return {{"mu", Prior::half_normal(return_sd * return_sd * 10.0)},
              {"alpha", Prior::uniform(0.0, 1.0)},
              {"beta", Prior::uniform(0.0, 1.0)},
              {"sigma1", Prior::half_normal(2.0 * return_sd)}};
    case ModelKind::kVs:
      return {{"mu", Prior::gamma(3.0, 0.03)},
              {"tau", Prior::beta(10.0, 0.5)},
              {"sigma_max", Prior::half_normal(3.0 * return_sd)}};
    case ModelKind::kFwFixed:
    case ModelKind::kFwRandomWalk: {
      std::map<std::string, Prior> p{{"phi", Prior::half_student_t(5.0, 1.0)},
                                     {"xi", Prior::half_student_t(5.0, 1.0)},
                                     {"sigma_f", Prior::half_normal(3.0 * return_sd / kFwMu)},
                                     {"sigma_c", Prior::half_normal(3.0 * return_sd / kFwMu)},
                                     {"alpha_0", Prior::student_t(5.0, 0.0, 1.0)},
                                     {"alpha_n", Prior::half_student_t(5.0, 1.0)},
                                     {"alpha_p", Prior::half_student_t(5.0, 30.0)}};
      if (kind == ModelKind::kFwRandomWalk) p.emplace("sigma_star", Prior::half_normal(return_sd));
      return p;
    }
  }
  throw std::invalid_argument("unknown model kind");
}

std::unique_ptr<Model> make_model(ModelKind kind, std::optional<PriceSeries> data, const ModelOptions& options) {
  switch (kind) {
    case ModelKind::kGarch: return std::make_unique<GarchModel>(std::move(data), options);
    case ModelKind::kVs: return std::make_unique<VsModel>(std::move(data), options);
    case ModelKind::kFwFixed:
      return std::make_unique<FwModel>(FwModel::Mode::kFixed, std::move(data), options);
    case ModelKind::kFwRandomWalk:
      return std::make_unique<FwModel>(FwModel::Mode::kRandomWalk, std::move(data), options);
  }
  throw std::invalid_argument("unknown model kind");
}

}  // namespace econofit
