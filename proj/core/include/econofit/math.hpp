#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "econofit/ad.hpp"

namespace econofit::math {

inline constexpr double kLogSqrtTwoPi = 0.91893853320467274178;  // 0.5 * log(2 pi)

inline double square(double x) { return x * x; }
using ad::square;

// Overflow-safe logistic: branch on the sign so exp never sees a large
// positive argument.
inline double logistic(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

inline ad::Var logistic(const ad::Var& u) {
  const double s = logistic(u.value());
  return ad::detail::unary(s, s * (1.0 - s), u);
}

/// log(logistic(u)), stable for large |u|.
inline double log_logistic(double u) {
  if (u >= 0.0) return -std::log1p(std::exp(-u));
  return u - std::log1p(std::exp(u));
}

inline ad::Var log_logistic(const ad::Var& u) {
  return ad::detail::unary(log_logistic(u.value()), 1.0 - logistic(u.value()), u);
}

inline double logit(double x) { return std::log(x / (1.0 - x)); }

inline double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return -INFINITY;
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

/// Gaussian log density parameterised by variance.
template <typename T, typename M, typename V>
auto normal_lpdf_var(const T& x, const M& mean, const V& variance) {
  using std::log;
  using ad::log;
  const auto d = x - mean;
  return -kLogSqrtTwoPi - 0.5 * log(variance) - 0.5 * (d * d) / variance;
}

}  // namespace econofit::math
