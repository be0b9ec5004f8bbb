#include "econofit/param_space.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace econofit {

Constraint Constraint::lower_bounded(double l) {
  if (!std::isfinite(l)) throw std::invalid_argument("lower bound must be finite");
  return Constraint{Kind::kLower, l, 0.0};
}

Constraint Constraint::interval(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("interval bounds must be finite");
  if (!(a < b)) throw std::invalid_argument("interval requires lower < upper");
  return Constraint{Kind::kInterval, a, b};
}

bool Constraint::contains_interior(double x) const {
  if (!std::isfinite(x)) return false;
  switch (kind) {
    case Kind::kUnbounded: return true;
    case Kind::kLower: return x > lower;
    case Kind::kInterval: return x > lower && x < upper;
  }
  return false;
}

TransformSpec::TransformSpec(std::vector<Constraint> constraints, std::vector<std::string> names)
    : constraints_(std::move(constraints)), names_(std::move(names)) {
  if (constraints_.size() != names_.size())
    throw std::invalid_argument("TransformSpec: constraints and names differ in length");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw std::invalid_argument("TransformSpec: duplicate name '" + n + "'");
  }
}

TransformSpec TransformSpec::prefix(std::size_t n) const {
  if (n > size()) throw std::invalid_argument("TransformSpec: prefix longer than the spec");
  return TransformSpec(std::vector<Constraint>(constraints_.begin(), constraints_.begin() + static_cast<std::ptrdiff_t>(n)),
                       std::vector<std::string>(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(n)));
}

std::size_t TransformSpec::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return static_cast<std::size_t>(it - names_.begin());
}

TransformSpec TransformSpec::all_unbounded(std::size_t n) {
  std::vector<Constraint> c(n);
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back("x[" + std::to_string(i + 1) + "]");
  return TransformSpec(std::move(c), std::move(names));
}

Constrained constrain(std::span<const double> u, const TransformSpec& spec) {
  if (u.size() != spec.size()) throw RejectionError("constrain: dimension mismatch");
  Constrained out;
  out.params.resize(spec.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) throw RejectionError("constrain: non-finite value for " + spec.names()[i]);
  }
  out.log_jacobian = constrain_into<double>(u, spec, out.params);
  return out;
}

std::vector<double> unconstrain(std::span<const double> x, const TransformSpec& spec) {
  if (x.size() != spec.size()) throw std::invalid_argument("unconstrain: dimension mismatch");
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Constraint& c = spec[i];
    if (!c.contains_interior(x[i])) {
      std::ostringstream msg;
      msg << "unconstrain: value " << x[i] << " for '" << spec.names()[i] << "' is outside the open support";
      throw std::domain_error(msg.str());
    }
    switch (c.kind) {
      case Constraint::Kind::kUnbounded: u[i] = x[i]; break;
      case Constraint::Kind::kLower: u[i] = std::log(x[i] - c.lower); break;
      case Constraint::Kind::kInterval: u[i] = std::log((x[i] - c.lower) / (c.upper - x[i])); break;
    }
  }
  return u;
}

}  // namespace econofit
