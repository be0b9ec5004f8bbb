#include "econofit/distributions.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace econofit {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Prior Prior::normal(double loc, double scale) {
  require(std::isfinite(loc) && scale > 0 && std::isfinite(scale), "normal prior: need finite loc, scale > 0");
  return Prior(Family::kNormal, loc, scale, 0);
}

Prior Prior::half_normal(double scale) {
  require(scale > 0 && std::isfinite(scale), "half_normal prior: need scale > 0");
  return Prior(Family::kHalfNormal, 0.0, scale, 0);
}

Prior Prior::student_t(double nu, double loc, double scale) {
  require(nu > 0 && std::isfinite(loc) && scale > 0, "student_t prior: need nu > 0, scale > 0");
  return Prior(Family::kStudentT, nu, loc, scale);
}

Prior Prior::half_student_t(double nu, double scale) {
  require(nu > 0 && scale > 0, "half_student_t prior: need nu > 0, scale > 0");
  return Prior(Family::kHalfStudentT, nu, 0.0, scale);
}

Prior Prior::beta(double a, double b) {
  require(a > 0 && b > 0, "beta prior: need a > 0, b > 0");
  return Prior(Family::kBeta, a, b, 0);
}

Prior Prior::gamma(double shape, double rate) {
  require(shape > 0 && rate > 0, "gamma prior: need shape > 0, rate > 0");
  return Prior(Family::kGamma, shape, rate, 0);
}

Prior Prior::uniform(double lower, double upper) {
  require(std::isfinite(lower) && std::isfinite(upper) && lower < upper, "uniform prior: need lower < upper");
  return Prior(Family::kUniform, lower, upper, 0);
}

Prior Prior::point_mass(double value) {
  Prior p(Family::kFlat, value, 0, 0);
  p.point_mass_ = true;
  return p;
}

void Prior::init_constant() {
  constexpr double log_two = std::numbers::ln2;
  switch (family_) {
    case Family::kFlat: log_const_ = 0.0; break;
    case Family::kUniform: log_const_ = -std::log(b_ - a_); break;
    case Family::kNormal: log_const_ = -math::kLogSqrtTwoPi - std::log(b_); break;
    case Family::kHalfNormal: log_const_ = log_two - math::kLogSqrtTwoPi - std::log(b_); break;
    case Family::kStudentT:
    case Family::kHalfStudentT:
      log_const_ = std::lgamma(0.5 * (a_ + 1.0)) - std::lgamma(0.5 * a_) -
                   0.5 * std::log(a_ * std::numbers::pi) - std::log(c_);
      if (family_ == Family::kHalfStudentT) log_const_ += log_two;
      break;
    case Family::kBeta:
      log_const_ = std::lgamma(a_ + b_) - std::lgamma(a_) - std::lgamma(b_);
      break;
    case Family::kGamma:
      log_const_ = a_ * std::log(b_) - std::lgamma(a_);
      break;
  }
}

double Prior::sample(Rng& rng) const {
  if (point_mass_) return a_;
  switch (family_) {
    case Family::kFlat:
      throw std::logic_error("cannot sample from an improper flat prior");
    case Family::kUniform:
      return std::uniform_real_distribution<double>(a_, b_)(rng);
    case Family::kNormal:
      return std::normal_distribution<double>(a_, b_)(rng);
    case Family::kHalfNormal:
      return std::fabs(std::normal_distribution<double>(0.0, b_)(rng));
    case Family::kStudentT:
      return b_ + c_ * std::student_t_distribution<double>(a_)(rng);
    case Family::kHalfStudentT:
      return std::fabs(c_ * std::student_t_distribution<double>(a_)(rng));
    case Family::kBeta: {
      const double x = std::gamma_distribution<double>(a_, 1.0)(rng);
      const double y = std::gamma_distribution<double>(b_, 1.0)(rng);
      // Keep draws strictly inside (0, 1) when one gamma underflows.
      return std::clamp(x / (x + y), std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
    }
    case Family::kGamma:
      return std::gamma_distribution<double>(a_, 1.0 / b_)(rng);
  }
  return 0.0;
}

std::string Prior::describe() const {
  std::ostringstream os;
  if (point_mass_) {
    os << "point_mass(" << a_ << ")";
    return os.str();
  }
  switch (family_) {
    case Family::kFlat: os << "flat()"; break;
    case Family::kUniform: os << "uniform(" << a_ << ", " << b_ << ")"; break;
    case Family::kNormal: os << "normal(" << a_ << ", " << b_ << ")"; break;
    case Family::kHalfNormal: os << "half_normal(" << b_ << ")"; break;
    case Family::kStudentT: os << "student_t(" << a_ << ", " << b_ << ", " << c_ << ")"; break;
    case Family::kHalfStudentT: os << "half_student_t(" << a_ << ", " << c_ << ")"; break;
    case Family::kBeta: os << "beta(" << a_ << ", " << b_ << ")"; break;
    case Family::kGamma: os << "gamma(" << a_ << ", " << b_ << ")"; break;
  }
  return os.str();
}

}  // namespace econofit
