#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "econofit/distributions.hpp"
#include "econofit/param_space.hpp"

namespace econofit {

/// Observed log prices p_1..p_N with optional opaque date labels.
class PriceSeries {
 public:
  static constexpr std::size_t kMinLength = 10;

  PriceSeries() = default;
  /// Validates length >= kMinLength and finiteness.
  explicit PriceSeries(std::vector<double> log_prices, std::vector<std::string> dates = {});

  std::size_t size() const { return log_prices_.size(); }
  const std::vector<double>& log_prices() const { return log_prices_; }
  const std::vector<std::string>& dates() const { return dates_; }

  /// First differences r_j = p_{j+1} - p_j, length size() - 1.
  std::vector<double> returns() const;
  double return_sd() const;

  /// Stable 64-bit hash of the values, used to check that fits share data.
  std::uint64_t fingerprint() const;

 private:
  std::vector<double> log_prices_;
  std::vector<std::string> dates_;
};

/// Anything the sampler can explore: a log density with gradient on R^d.
class DensityTarget {
 public:
  virtual ~DensityTarget() = default;
  virtual std::size_t dimension() const = 0;
  /// Returns log p(u) and writes its gradient. Throws RejectionError when the
  /// density cannot be evaluated.
  virtual double log_density(std::span<const double> u, std::span<double> grad) const = 0;
};

enum class ModelKind { kGarch, kVs, kFwFixed, kFwRandomWalk };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

/// Per-time-step latent quantities indexed by price index t (0-based).
/// sigma[t] is the conditional sd of the return from p_t to p_{t+1}.
struct LatentPath {
  std::vector<double> sigma;
  std::vector<double> n_f;
  std::vector<double> p_star;
};

struct SimulatedPath {
  std::vector<double> log_prices;
  LatentPath latent;
};

/// `horizon` steps beyond the last observed price.
struct ForecastPath {
  std::vector<double> returns;
  std::vector<double> log_prices;
  std::vector<double> sigma;
};

struct ModelOptions {
  std::map<std::string, Prior> prior_overrides;
  /// Fundamental log price for the fixed-p* FW variant.
  double p_star = 0.0;
  /// Return scale for data-scaled priors when no data is attached or the
  /// attached prices never move.
  double return_sd = 0.01;
};

class Model : public DensityTarget {
 public:
  ModelKind kind() const { return kind_; }
  std::string_view name() const { return to_string(kind_); }
  const TransformSpec& transform() const { return transform_; }
  std::size_t dimension() const override { return transform_.size(); }

  /// Number of leading coordinates that are model parameters; the rest are
  /// latent standardized innovations.
  std::size_t num_structural() const { return priors_.size(); }
  const std::vector<Prior>& priors() const { return priors_; }
  std::vector<std::string> structural_names() const;

  bool has_data() const { return data_.has_value(); }
  const PriceSeries& data() const;

  /// Same density with the whole computation on the autodiff tape. Slower
  /// than log_density; kept as a reference for the analytic gradients.
  virtual double log_density_reference(std::span<const double> u, std::span<double> grad) const = 0;

  /// Log joint value without gradient.
  virtual double log_density_value(std::span<const double> u) const = 0;

  /// Log-likelihood of each modelled return, conditional on any latent path
  /// in u. Entries cover returns first_return() .. N-2.
  virtual std::vector<double> pointwise_loglik(std::span<const double> u) const = 0;

  /// log prior + log Jacobian, so that sum(pointwise) + this == log density.
  virtual double log_prior_jacobian(std::span<const double> u) const = 0;

  /// Index (into data().returns()) of the first return with a likelihood term.
  virtual std::size_t first_return() const = 0;

  /// Return indices covered by pointwise_loglik.
  std::vector<std::size_t> observation_indices() const;

  /// Deterministic state recursion over the attached data. `theta` is on the
  /// constrained scale (full dimension).
  virtual LatentPath latent_path(std::span<const double> theta) const = 0;

  /// Simulates T prices. `structural` holds num_structural() constrained
  /// values; `init` supplies leading log prices (defaults to {0}).
  virtual SimulatedPath simulate(std::span<const double> structural, std::size_t T,
                                 std::span<const double> init, Rng& rng) const = 0;

  /// Runs the model forward from the terminal state reconstructed from data.
  virtual ForecastPath forecast(std::span<const double> theta, std::size_t horizon, Rng& rng) const = 0;

  /// Draws structural parameters from the priors.
  std::vector<double> sample_prior(Rng& rng) const;

  /// Validates constrained structural parameters against their constraints.
  void check_structural(std::span<const double> structural) const;

 protected:
  Model(ModelKind kind, std::optional<PriceSeries> data) : kind_(kind), data_(std::move(data)) {}

  // Installs the transform and the priors of the first `num_structural`
  // coordinates: family defaults with `options.prior_overrides` applied.
  void set_parameters(TransformSpec spec, std::size_t num_structural, const ModelOptions& options);

  ModelKind kind_;
  std::optional<PriceSeries> data_;
  TransformSpec transform_;
  std::vector<Prior> priors_;
};

/// Default priors of a model family, scaled by the return sd where needed.
std::map<std::string, Prior> default_priors(ModelKind kind, double return_sd);

std::unique_ptr<Model> make_model(ModelKind kind, std::optional<PriceSeries> data,
                                  const ModelOptions& options = {});

}  // namespace econofit
