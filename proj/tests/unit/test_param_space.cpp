#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "econofit/param_space.hpp"

using namespace econofit;

namespace {

TransformSpec mixed_spec() {
  return TransformSpec({Constraint::unbounded(), Constraint::lower_bounded(0.0), Constraint::lower_bounded(-2.5),
                        Constraint::interval(0.0, 1.0), Constraint::interval(-3.0, 7.0)},
                       {"a", "b", "c", "d", "e"});
}

}  // namespace

TEST_SUITE("param-space") {
  TEST_CASE("lower bound at zero maps u=0 to one with no jacobian") {
    const TransformSpec spec({Constraint::lower_bounded(0.0)}, {"x"});
    const std::vector<double> u{0.0};
    const auto c = constrain(u, spec);
    CHECK(c.params[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.log_jacobian == doctest::Approx(0.0));
  }

  TEST_CASE("unit interval at u=0 gives one half and log 0.25") {
    const TransformSpec spec({Constraint::interval(0.0, 1.0)}, {"x"});
    const std::vector<double> u{0.0};
    const auto c = constrain(u, spec);
    CHECK(c.params[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.log_jacobian == doctest::Approx(-1.386294361).epsilon(1e-9));
    // Numerical dx/du at 0.
    const double h = 1e-6;
    const std::vector<double> up{h}, down{-h};
    const double slope = (constrain(up, spec).params[0] - constrain(down, spec).params[0]) / (2 * h);
    CHECK(slope == doctest::Approx(0.25).epsilon(1e-8));
  }

  TEST_CASE("unbounded coordinate is the identity") {
    const auto spec = TransformSpec::all_unbounded(1);
    const std::vector<double> u{-3.7};
    const auto c = constrain(u, spec);
    CHECK(c.params[0] == -3.7);
    CHECK(c.log_jacobian == 0.0);
  }

  TEST_CASE("unconstrain examples") {
    const TransformSpec lower({Constraint::lower_bounded(0.0)}, {"x"});
    const std::vector<double> one{1.0};
    CHECK(unconstrain(one, lower)[0] == doctest::Approx(0.0).epsilon(1e-15));

    const TransformSpec unit({Constraint::interval(0.0, 1.0)}, {"tau"});
    const std::vector<double> x{0.999};
    CHECK(unconstrain(x, unit)[0] == doctest::Approx(6.906754778648554).epsilon(1e-12));

    const std::vector<double> edge{1.0};
    CHECK_THROWS_AS(unconstrain(edge, unit), std::domain_error);
    try {
      unconstrain(edge, unit);
    } catch (const std::domain_error& e) {
      CHECK(std::string(e.what()).find("tau") != std::string::npos);
    }
  }

  TEST_CASE("boundary and out-of-range values are domain errors") {
    const auto spec = mixed_spec();
    CHECK_THROWS_AS(unconstrain(std::vector<double>{0.0, 0.0, 1.0, 0.5, 0.0}, spec), std::domain_error);
    CHECK_THROWS_AS(unconstrain(std::vector<double>{0.0, 1.0, -2.5, 0.5, 0.0}, spec), std::domain_error);
    CHECK_THROWS_AS(unconstrain(std::vector<double>{0.0, 1.0, 1.0, 0.0, 0.0}, spec), std::domain_error);
    CHECK_THROWS_AS(unconstrain(std::vector<double>{0.0, 1.0, 1.0, 0.5, 7.0}, spec), std::domain_error);
    CHECK_THROWS_AS(unconstrain(std::vector<double>{NAN, 1.0, 1.0, 0.5, 0.0}, spec), std::domain_error);
  }

  TEST_CASE("non-finite or mis-sized input is a rejection") {
    const auto spec = mixed_spec();
    CHECK_THROWS_AS(constrain(std::vector<double>{0, INFINITY, 0, 0, 0}, spec), RejectionError);
    CHECK_THROWS_AS(constrain(std::vector<double>{0, NAN, 0, 0, 0}, spec), RejectionError);
    CHECK_THROWS_AS(constrain(std::vector<double>{0, 0}, spec), RejectionError);
  }

  TEST_CASE("spec validation") {
    CHECK_THROWS(TransformSpec({Constraint::unbounded()}, {"a", "b"}));
    CHECK_THROWS(TransformSpec({Constraint::unbounded(), Constraint::unbounded()}, {"a", "a"}));
    CHECK_THROWS(Constraint::interval(1.0, 1.0));
    CHECK_THROWS(Constraint::interval(2.0, 1.0));
    CHECK_THROWS(Constraint::lower_bounded(INFINITY));
    CHECK(mixed_spec().index_of("d") == 3);
  }

  TEST_CASE("round trip over random interior points") {
    const auto spec = mixed_spec();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(1e-6, 1.0 - 1e-6);
    std::normal_distribution<double> normal(0.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
      const std::vector<double> x{normal(rng), std::exp(normal(rng)), -2.5 + std::exp(normal(rng)), unit(rng),
                                  -3.0 + 10.0 * unit(rng)};
      const auto back = constrain(unconstrain(x, spec), spec).params;
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back[i] - x[i]) <= 1e-10 * (1.0 + std::abs(x[i])));
    }
  }

  TEST_CASE("log jacobian equals log of numerical derivatives") {
    const auto spec = mixed_spec();
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> u(spec.size());
      for (double& v : u) v = normal(rng);
      const double logj = constrain(u, spec).log_jacobian;
      double numeric = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double h = 1e-5;
        auto up = u, down = u;
        up[i] += h;
        down[i] -= h;
        const double d = (constrain(up, spec).params[i] - constrain(down, spec).params[i]) / (2 * h);
        numeric += std::log(d);
      }
      CHECK(logj == doctest::Approx(numeric).epsilon(1e-6).scale(1.0));
    }
  }

  TEST_CASE("coordinate maps are strictly increasing and stable for large u") {
    const auto spec = mixed_spec();
    std::vector<double> prev;
    for (double t = -30.0; t <= 30.0; t += 0.25) {
      const std::vector<double> u(spec.size(), t);
      const auto c = constrain(u, spec);
      if (!prev.empty())
        for (std::size_t i = 0; i < u.size(); ++i) CHECK(c.params[i] > prev[i]);
      prev = c.params;
    }
    const TransformSpec unit({Constraint::interval(0.0, 1.0)}, {"x"});
    for (double u : {-800.0, 800.0}) {
      const auto c = constrain(std::vector<double>{u}, unit);
      CHECK(std::isfinite(c.params[0]));
      CHECK(std::isfinite(c.log_jacobian));
    }
  }
}
