#pragma once

// Minimal reverse-mode automatic differentiation for scalar log densities.
//
// Every arithmetic operation on `Var` appends one node to a thread-local
// tape holding at most two parent indices and the local partials. A reverse
// sweep over the tape accumulates adjoints. Node 0 is a sink used for
// constants, so a `Var` built from a plain double never reaches the result
// gradient.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace econofit::ad {

struct Node {
  double partial[2];
  std::uint32_t parent[2];
};

class Tape {
 public:
  void reset() {
    nodes_.clear();
    nodes_.push_back(Node{{0.0, 0.0}, {0, 0}});
  }

  std::uint32_t push(double d0, std::uint32_t p0, double d1, std::uint32_t p1) {
    nodes_.push_back(Node{{d0, d1}, {p0, p1}});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t push_leaf() { return push(0.0, 0, 0.0, 0); }

  std::size_t size() const { return nodes_.size(); }

  /// Reverse sweep seeded at `output`; returns adjoints for every node.
  const std::vector<double>& sweep(std::uint32_t output) {
    adjoints_.assign(nodes_.size(), 0.0);
    adjoints_[output] = 1.0;
    for (std::size_t i = nodes_.size() - 1; i > 0; --i) {
      const double a = adjoints_[i];
      if (a == 0.0) continue;
      const Node& n = nodes_[i];
      adjoints_[n.parent[0]] += n.partial[0] * a;
      adjoints_[n.parent[1]] += n.partial[1] * a;
    }
    return adjoints_;
  }

 private:
  std::vector<Node> nodes_{Node{{0.0, 0.0}, {0, 0}}};
  std::vector<double> adjoints_;
};

inline Tape& tape() {
  thread_local Tape t;
  return t;
}

class Var {
 public:
  Var() = default;
  Var(double v) : value_(v), index_(0) {}  // NOLINT: constants convert implicitly
  Var(double v, std::uint32_t index) : value_(v), index_(index) {}

  double value() const { return value_; }
  std::uint32_t index() const { return index_; }
  bool is_constant() const { return index_ == 0; }

  Var& operator+=(const Var& o);
  Var& operator-=(const Var& o);
  Var& operator*=(const Var& o);
  Var& operator/=(const Var& o);

 private:
  double value_ = 0.0;
  std::uint32_t index_ = 0;
};

namespace detail {

inline Var unary(double value, double partial, const Var& a) {
  if (a.is_constant()) return Var(value);
  return Var(value, tape().push(partial, a.index(), 0.0, 0));
}

inline Var binary(double value, double da, const Var& a, double db, const Var& b) {
  if (a.is_constant() && b.is_constant()) return Var(value);
  return Var(value, tape().push(da, a.index(), db, b.index()));
}

}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
  return detail::binary(a.value() + b.value(), 1.0, a, 1.0, b);
}
inline Var operator-(const Var& a, const Var& b) {
  return detail::binary(a.value() - b.value(), 1.0, a, -1.0, b);
}
inline Var operator*(const Var& a, const Var& b) {
  return detail::binary(a.value() * b.value(), b.value(), a, a.value(), b);
}
inline Var operator/(const Var& a, const Var& b) {
  const double inv = 1.0 / b.value();
  const double q = a.value() * inv;
  return detail::binary(q, inv, a, -q * inv, b);
}
inline Var operator-(const Var& a) { return detail::unary(-a.value(), -1.0, a); }

inline Var& Var::operator+=(const Var& o) { return *this = *this + o; }
inline Var& Var::operator-=(const Var& o) { return *this = *this - o; }
inline Var& Var::operator*=(const Var& o) { return *this = *this * o; }
inline Var& Var::operator/=(const Var& o) { return *this = *this / o; }

inline bool operator<(const Var& a, const Var& b) { return a.value() < b.value(); }
inline bool operator>(const Var& a, const Var& b) { return a.value() > b.value(); }
inline bool operator<=(const Var& a, const Var& b) { return a.value() <= b.value(); }
inline bool operator>=(const Var& a, const Var& b) { return a.value() >= b.value(); }

inline Var exp(const Var& a) {
  const double e = std::exp(a.value());
  return detail::unary(e, e, a);
}
inline Var log(const Var& a) { return detail::unary(std::log(a.value()), 1.0 / a.value(), a); }
inline Var log1p(const Var& a) {
  return detail::unary(std::log1p(a.value()), 1.0 / (1.0 + a.value()), a);
}
inline Var sqrt(const Var& a) {
  const double s = std::sqrt(a.value());
  return detail::unary(s, 0.5 / s, a);
}
inline Var square(const Var& a) { return detail::unary(a.value() * a.value(), 2.0 * a.value(), a); }
inline Var abs(const Var& a) {
  const double v = a.value();
  return detail::unary(std::fabs(v), v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0), a);
}
inline Var pow(const Var& a, double p) {
  const double v = std::pow(a.value(), p);
  return detail::unary(v, p * std::pow(a.value(), p - 1.0), a);
}
inline Var tanh(const Var& a) {
  const double t = std::tanh(a.value());
  return detail::unary(t, 1.0 - t * t, a);
}

inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.value(); }

/// Evaluates `f` on leaves bound to `x`, writing d f / d x into `grad`.
/// `f` receives `std::span<const Var>` and must return a `Var`.
template <typename F>
double gradient(F&& f, std::span<const double> x, std::span<double> grad) {
  Tape& t = tape();
  t.reset();
  std::vector<Var> leaves;
  leaves.reserve(x.size());
  for (double xi : x) leaves.emplace_back(xi, t.push_leaf());
  const Var out = f(std::span<const Var>(leaves));
  if (out.is_constant()) {
    for (double& g : grad) g = 0.0;
    return out.value();
  }
  const auto& adj = t.sweep(out.index());
  for (std::size_t i = 0; i < x.size(); ++i) grad[i] = adj[leaves[i].index()];
  return out.value();
}

}  // namespace econofit::ad
