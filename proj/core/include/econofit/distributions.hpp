#pragma once

#include <cmath>
#include <random>
#include <string>
#include <string_view>

#include "econofit/ad.hpp"
#include "econofit/math.hpp"

namespace econofit {

using Rng = std::mt19937_64;

/// Univariate prior with normalised log density. Half-* variants have a
/// location of zero and support [0, inf).
class Prior {
 public:
  enum class Family {
    kFlat,
    kNormal,
    kHalfNormal,
    kStudentT,
    kHalfStudentT,
    kBeta,
    kGamma,
    kUniform,
  };

  static Prior flat() { return Prior(Family::kFlat, 0, 0, 0); }
  static Prior normal(double loc, double scale);
  static Prior half_normal(double scale);
  static Prior student_t(double nu, double loc, double scale);
  static Prior half_student_t(double nu, double scale);
  static Prior beta(double a, double b);
  /// Shape-rate parameterisation.
  static Prior gamma(double shape, double rate);
  static Prior uniform(double lower, double upper);
  /// Degenerate prior used in tests: samples always return `value`, density flat.
  static Prior point_mass(double value);

  Family family() const { return family_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  bool is_point_mass() const { return point_mass_; }

  double sample(Rng& rng) const;
  std::string describe() const;

  template <typename T>
  T lpdf(const T& x) const;

 private:
  Prior(Family f, double a, double b, double c) : family_(f), a_(a), b_(b), c_(c) { init_constant(); }
  void init_constant();

  Family family_;
  double a_, b_, c_;
  double log_const_ = 0.0;
  bool point_mass_ = false;
};

template <typename T>
T Prior::lpdf(const T& x) const {
  using std::log;
  using std::log1p;
  using ad::log;
  using ad::log1p;
  switch (family_) {
    case Family::kFlat:
    case Family::kUniform:
      return T(log_const_);
    case Family::kNormal:
    case Family::kHalfNormal: {
      const T z = (x - a_) / b_;
      return log_const_ - 0.5 * z * z;
    }
    case Family::kStudentT:
    case Family::kHalfStudentT: {
      const T z = (x - b_) / c_;
      return log_const_ - 0.5 * (a_ + 1.0) * log1p(z * z / a_);
    }
    case Family::kBeta:
      return log_const_ + (a_ - 1.0) * log(x) + (b_ - 1.0) * log1p(-x);
    case Family::kGamma:
      return log_const_ + (a_ - 1.0) * log(x) - b_ * x;
  }
  return T(0.0);
}

}  // namespace econofit
