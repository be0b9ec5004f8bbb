#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "econofit/ad.hpp"
#include "econofit/math.hpp"

namespace econofit {

/// Thrown when a proposal cannot be evaluated (non-finite input or density).
/// The sampler treats it as a rejected / divergent point.
class RejectionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Constraint {
  enum class Kind { kUnbounded, kLower, kInterval };

  Kind kind = Kind::kUnbounded;
  double lower = 0.0;
  double upper = 0.0;

  static Constraint unbounded() { return {}; }
  static Constraint lower_bounded(double l);
  static Constraint interval(double a, double b);

  bool contains_interior(double x) const;
};

/// Ordered coordinate constraints with parallel, unique names.
class TransformSpec {
 public:
  TransformSpec() = default;
  TransformSpec(std::vector<Constraint> constraints, std::vector<std::string> names);

  std::size_t size() const { return constraints_.size(); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<std::string>& names() const { return names_; }
  const Constraint& operator[](std::size_t i) const { return constraints_[i]; }

  /// Index of a named coordinate, or size() when absent.
  std::size_t index_of(const std::string& name) const;

  /// The first `n` coordinates.
  TransformSpec prefix(std::size_t n) const;

  /// Spec of `n` unbounded coordinates named x[1], x[2], ...
  static TransformSpec all_unbounded(std::size_t n);

 private:
  std::vector<Constraint> constraints_;
  std::vector<std::string> names_;
};

struct Constrained {
  std::vector<double> params;
  double log_jacobian = 0.0;
};

/// Maps an unconstrained vector to the constrained space. Throws
/// RejectionError on non-finite input or dimension mismatch.
Constrained constrain(std::span<const double> u, const TransformSpec& spec);

/// Inverse of `constrain`. Throws std::domain_error naming the coordinate
/// when a value lies on or outside its constraint boundary.
std::vector<double> unconstrain(std::span<const double> x, const TransformSpec& spec);

/// Single-coordinate forward map shared by the double and AD paths. Adds the
/// log-Jacobian contribution to `log_jacobian`.
template <typename T>
T constrain_coordinate(const T& u, const Constraint& c, T& log_jacobian) {
  using std::exp;
  using ad::exp;
  switch (c.kind) {
    case Constraint::Kind::kUnbounded:
      return u;
    case Constraint::Kind::kLower:
      log_jacobian += u;
      return c.lower + exp(u);
    case Constraint::Kind::kInterval: {
      const double width = c.upper - c.lower;
      // log s + log(1 - s) = log_logistic(u) + log_logistic(-u)
      log_jacobian += std::log(width) + math::log_logistic(u) + math::log_logistic(-u);
      return c.lower + width * math::logistic(u);
    }
  }
  return u;
}

/// d x / d u of a single coordinate map.
inline double constrain_derivative(double u, const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::kUnbounded:
      return 1.0;
    case Constraint::Kind::kLower:
      return std::exp(u);
    case Constraint::Kind::kInterval:
      return (c.upper - c.lower) * math::logistic(u) * math::logistic(-u);
  }
  return 1.0;
}

/// Templated whole-vector transform used inside log densities.
template <typename T>
T constrain_into(std::span<const T> u, const TransformSpec& spec, std::span<T> out) {
  T log_jacobian = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i)
    out[i] = constrain_coordinate(u[i], spec[i], log_jacobian);
  return log_jacobian;
}

}  // namespace econofit
