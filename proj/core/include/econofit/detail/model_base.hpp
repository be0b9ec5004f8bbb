#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "econofit/ad.hpp"
#include "econofit/math.hpp"
#include "econofit/model.hpp"

namespace econofit::detail {

/// Wires a family's templated `loglik<T>(theta, pointwise)` and its
/// hand-written `loglik_gradient(theta, dtheta)` into the Model interface.
/// Coordinates past num_structural() are standard normal innovations.
template <typename Derived>
class ModelBase : public Model {
 public:
  double log_density(std::span<const double> u, std::span<double> grad) const override {
    check_input(u);
    const std::size_t k = priors_.size();
    const auto& constraints = transform_.constraints();
    std::vector<double> theta(u.begin(), u.end());
    double lp = ad::gradient(
        [&](std::span<const ad::Var> v) {
          ad::Var out = 0.0;
          for (std::size_t i = 0; i < k; ++i) {
            const ad::Var x = constrain_coordinate(v[i], constraints[i], out);
            out += priors_[i].lpdf(x);
            theta[i] = x.value();
          }
          return out;
        },
        u.first(k), grad.first(k));
    for (std::size_t i = k; i < u.size(); ++i) {
      lp += -math::kLogSqrtTwoPi - 0.5 * (u[i] * u[i]);
      grad[i] = -u[i];
    }
    std::vector<double> dtheta(u.size(), 0.0);
    lp += static_cast<const Derived*>(this)->loglik_gradient(theta, dtheta);
    for (std::size_t i = 0; i < u.size(); ++i) grad[i] += dtheta[i] * constrain_derivative(u[i], constraints[i]);
    return checked(lp, grad);
  }

  double log_density_reference(std::span<const double> u, std::span<double> grad) const override {
    check_input(u);
    const double lp = ad::gradient(
        [this](std::span<const ad::Var> v) { return joint<ad::Var>(v, nullptr); }, u, grad);
    return checked(lp, grad);
  }

  double log_density_value(std::span<const double> u) const override {
    check_input(u);
    const double lp = joint<double>(u, nullptr);
    if (!std::isfinite(lp)) throw RejectionError(std::string(name()) + ": non-finite log density");
    return lp;
  }

  std::vector<double> pointwise_loglik(std::span<const double> u) const override {
    check_input(u);
    std::vector<double> out;
    joint<double>(u, &out);
    for (double v : out)
      if (!std::isfinite(v)) throw RejectionError(std::string(name()) + ": non-finite pointwise term");
    return out;
  }

  double log_prior_jacobian(std::span<const double> u) const override {
    check_input(u);
    std::vector<double> theta(u.size());
    return prior_jacobian<double>(u, theta);
  }

 protected:
  using Model::Model;

  template <typename T>
  T prior_jacobian(std::span<const T> u, std::span<T> theta) const {
    T lp = constrain_into<T>(u, transform_, theta);
    const std::size_t k = priors_.size();
    for (std::size_t i = 0; i < k; ++i) lp += priors_[i].lpdf(theta[i]);
    for (std::size_t i = k; i < theta.size(); ++i) lp += -math::kLogSqrtTwoPi - 0.5 * (theta[i] * theta[i]);
    return lp;
  }

  template <typename T>
  T joint(std::span<const T> u, std::vector<double>* pointwise) const {
    std::vector<T> theta(u.size());
    T lp = prior_jacobian<T>(u, theta);
    lp += static_cast<const Derived*>(this)->template loglik<T>(std::span<const T>(theta), pointwise);
    return lp;
  }

 private:
  double checked(double lp, std::span<const double> grad) const {
    if (!std::isfinite(lp)) throw RejectionError(std::string(name()) + ": non-finite log density");
    for (double g : grad)
      if (!std::isfinite(g)) throw RejectionError(std::string(name()) + ": non-finite gradient");
    return lp;
  }

  void check_input(std::span<const double> u) const {
    if (!has_data()) throw std::logic_error(std::string(name()) + ": no data attached");
    if (u.size() != dimension()) throw RejectionError(std::string(name()) + ": dimension mismatch");
    for (double x : u)
      if (!std::isfinite(x)) throw RejectionError(std::string(name()) + ": non-finite unconstrained input");
  }
};

}  // namespace econofit::detail
