#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ide/errors.hpp"
#include "ide/speeds.hpp"

using namespace ide;

namespace {

constexpr double e = std::numbers::e;

// Closed form for a gaussian(m, v) kernel with coefficient a > 1.
double gaussian_speed(double a, double m, double v, Side side) {
  return (side == Side::plus ? m : -m) + std::sqrt(2.0 * v * std::log(a));
}

// Brute-force minimum of (1/mu) ln(a M(+-mu)) for a laplace kernel, independent of the library.
double laplace_speed_scan(double a, double rate, double shift, Side side) {
  const double s = side == Side::plus ? shift : -shift;
  auto f = [&](double mu) { return (s * mu + std::log(rate * rate / (rate * rate - mu * mu)) + std::log(a)) / mu; };
  double best = INFINITY, arg = 0.0;
  const int n = 200000;
  for (int i = 1; i < n; ++i) {
    const double mu = rate * i / n;
    if (f(mu) < best) best = f(mu), arg = mu;
  }
  double lo = std::max(1e-9, arg - rate / n), hi = std::min(rate * (1 - 1e-12), arg + rate / n);
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    (f(m1) < f(m2) ? hi : lo) = (f(m1) < f(m2) ? m2 : m1);
  }
  return f(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("counterexample kernel speeds") {
  const Kernel k = Kernel::gaussian(2.0, 0.5);
  const SpeedResult minus = spreading_speed(e, k, Side::minus);
  CHECK(minus.c == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(minus.mu == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(minus.attainment == Attainment::interior);
  const SpeedResult plus = spreading_speed(e, k, Side::plus);
  CHECK(plus.c == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(plus.mu == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("standard gaussian speeds are sqrt(2)") {
  const SpeedReport r = speed_report(e, Kernel::gaussian(0.0, 1.0));
  CHECK(std::abs(r.c_minus - std::sqrt(2.0)) < 1e-9);
  CHECK(std::abs(r.c_plus - std::sqrt(2.0)) < 1e-9);
  CHECK(r.mu_plus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(r.evaluations > 0);
}

TEST_CASE("gaussian closed forms across parameters") {
  for (double a : {1.3, 2.0, e, 7.5}) {
    for (auto [m, v] : {std::pair{0.0, 1.0}, {1.2, 0.3}, {-0.7, 2.5}}) {
      const Kernel k = Kernel::gaussian(m, v);
      for (Side s : {Side::minus, Side::plus}) {
        const auto r = spreading_speed(a, k, s);
        REQUIRE(std::abs(r.c - gaussian_speed(a, m, v, s)) < 1e-8);
        REQUIRE(r.mu == doctest::Approx(std::sqrt(2.0 * std::log(a) / v)).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("laplace speeds agree with a brute-force scan") {
  for (double a : {1.5, e}) {
    const Kernel k = Kernel::laplace(2.0, 0.5);
    for (Side s : {Side::minus, Side::plus}) {
      CHECK(spreading_speed(a, k, s).c == doctest::Approx(laplace_speed_scan(a, 2.0, 0.5, s)).epsilon(1e-8));
    }
  }
}

TEST_CASE("symmetric kernels give symmetric speeds") {
  for (const Kernel& k : {Kernel::gaussian(0.0, 2.0), Kernel::laplace(1.0), Kernel::tabulated({-1, 0, 1}, {0, 1, 0})}) {
    const auto r = speed_report(2.0, k);
    CHECK(r.c_minus == doctest::Approx(r.c_plus).epsilon(1e-9));
  }
}

TEST_CASE("quadrature path matches analytic path") {
  SpeedOptions q;
  q.path = MgfPath::quadrature;
  for (const Kernel& k : {Kernel::gaussian(2.0, 0.5), Kernel::gaussian(0.0, 1.0), Kernel::gaussian(-1.0, 2.0)}) {
    const auto a = speed_report(e, k);
    const auto b = speed_report(e, k, q);
    CHECK(std::abs(a.c_minus - b.c_minus) < 1e-6);
    CHECK(std::abs(a.c_plus - b.c_plus) < 1e-6);
  }
}

TEST_CASE("infimum at the lower boundary is flagged") {
  // coef = 1: the objective decreases to the mean drift as mu -> 0
  const Kernel k = Kernel::gaussian(2.0, 0.5);
  const auto r = spreading_speed(1.0, k, Side::plus);
  CHECK(r.attainment == Attainment::lower_boundary);
  CHECK(r.mu == doctest::Approx(1e-4));
  CHECK(r.c == doctest::Approx(2.0 + 0.25 * 1e-4).epsilon(1e-12));
  CHECK(to_string(r.attainment) == "lower_boundary");
}

TEST_CASE("objective minimum is global on a log grid") {
  const Kernel k = Kernel::gaussian(2.0, 0.5);
  for (Side s : {Side::minus, Side::plus}) {
    const auto r = spreading_speed(e, k, s);
    for (int i = 0; i < 100; ++i) {
      const double mu = 1e-4 * std::pow(50.0 / 1e-4, i / 99.0);
      REQUIRE(r.c <= speed_objective(e, k, s, mu) + 1e-12);
    }
  }
}

TEST_CASE("speeds grow with the coefficient") {
  const Kernel k = Kernel::laplace(1.5, 0.4);
  for (Side s : {Side::minus, Side::plus}) {
    double prev = -INFINITY;
    for (double a : {1.01, 1.2, 2.0, 3.0, 10.0}) {
      const double c = spreading_speed(a, k, s).c;
      REQUIRE(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("moment domain clips the search") {
  const Kernel k = Kernel::laplace(1.0);
  const auto r = spreading_speed(e, k, Side::plus);
  CHECK(r.mu < 1.0);
  CHECK(std::isfinite(r.c));
  CHECK_THROWS_AS(spreading_speed(0.0, k, Side::plus), InvalidArgument);
  SpeedOptions bad;
  bad.mu_hi = bad.mu_lo;
  CHECK_THROWS_AS(spreading_speed(e, k, Side::plus, bad), InvalidArgument);
}

TEST_CASE("envelope speed uses the +inf limit of the envelope") {
  const Habitat h = counterexample_h(1.0);
  const LinearEnvelope env = build_envelope(h, 0.1, h.caps().back());
  const Kernel k = Kernel::gaussian(2.0, 0.5);
  const auto r = envelope_speed(env, k, Side::minus);
  CHECK(r.c == doctest::Approx(-2.0 + std::sqrt(std::log(e + 0.1))).epsilon(1e-9));
}

TEST_CASE("decay rate") {
  const Kernel k = Kernel::gaussian(2.0, 0.5);
  const double coef = e + 0.1;
  const DecayReport d = decay_rate(coef, k, 0.3);
  CHECK(d.c_star_minus == doctest::Approx(-2.0 + std::sqrt(std::log(coef))).epsilon(1e-9));
  CHECK(d.lambda_mu < d.bound);
  CHECK(d.bound < 1.0);
  CHECK(d.lambda_mu == doctest::Approx(coef * std::exp(-2.0 * d.mu_eps + 0.25 * d.mu_eps * d.mu_eps)));
  CHECK_THROWS_AS(decay_rate(coef, k, 0.99), InvalidArgument);
  CHECK_THROWS_AS(decay_rate(coef, k, 0.0), InvalidArgument);
  CHECK_THROWS_AS(decay_rate(e, Kernel::gaussian(0.0, 1.0), 0.1), HypothesisViolation);
}
