#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "econofit/model.hpp"
#include "econofit/param_space.hpp"

namespace econofit::testing {

/// Independent Gaussian with per-coordinate scale.
class DiagonalGaussian : public DensityTarget {
 public:
  explicit DiagonalGaussian(std::vector<double> sd, std::vector<double> mean = {})
      : sd_(std::move(sd)), mean_(mean.empty() ? std::vector<double>(sd_.size(), 0.0) : std::move(mean)) {}

  std::size_t dimension() const override { return sd_.size(); }
  double log_density(std::span<const double> u, std::span<double> grad) const override {
    double lp = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double z = (u[i] - mean_[i]) / sd_[i];
      lp -= 0.5 * z * z;
      grad[i] = -z / sd_[i];
    }
    return lp;
  }

 private:
  std::vector<double> sd_;
  std::vector<double> mean_;
};

/// Standard bivariate Gaussian with correlation rho.
class CorrelatedGaussian : public DensityTarget {
 public:
  explicit CorrelatedGaussian(double rho) : rho_(rho) {}
  std::size_t dimension() const override { return 2; }
  double log_density(std::span<const double> u, std::span<double> grad) const override {
    const double c = 1.0 / (1.0 - rho_ * rho_);
    const double x = u[0];
    const double y = u[1];
    grad[0] = -c * (x - rho_ * y);
    grad[1] = -c * (y - rho_ * x);
    return -0.5 * c * (x * x - 2.0 * rho_ * x * y + y * y);
  }

 private:
  double rho_;
};

/// Central finite-difference gradient with a per-coordinate step. Differences
/// are taken over steps from 1e-3 down to 1e-8 times max(1, |x|) and the pair
/// of neighbouring steps that agree best gives the estimate, which avoids
/// both rounding noise and curvature.
template <typename F>
std::vector<double> numeric_gradient(F&& f, std::vector<double> x) {
  constexpr int kSteps = 11;
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    const double scale = std::max(1.0, std::abs(x0));
    double d[kSteps];
    for (int k = 0; k < kSteps; ++k) {
      const double h = scale * std::pow(10.0, -3.0 - 0.5 * k);
      x[i] = x0 + h;
      const double up = f(x);
      x[i] = x0 - h;
      const double down = f(x);
      x[i] = x0;
      d[k] = (up - down) / (2.0 * h);
    }
    double best_gap = INFINITY;
    g[i] = d[kSteps - 1];
    for (int k = 0; k + 1 < kSteps; ++k) {
      const double gap = std::abs(d[k] - d[k + 1]);
      if (gap < best_gap) {
        best_gap = gap;
        g[i] = 0.5 * (d[k] + d[k + 1]);
      }
    }
  }
  return g;
}

inline std::vector<double> pooled_column(std::span<const std::vector<double>> chains) {
  std::vector<double> out;
  for (const auto& c : chains) out.insert(out.end(), c.begin(), c.end());
  return out;
}

inline double sample_mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double sample_variance(std::span<const double> x) {
  const double m = sample_mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace econofit::testing
