#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ide/errors.hpp"
#include "ide/fixedpoint.hpp"
#include "ide/properties.hpp"
#include "ide/spectral.hpp"

using namespace ide;

namespace {

// sup |Q[W] - W| evaluated pointwise from the habitat and the raw stencil, without EvolutionOp.
double independent_residual(const Kernel& k, const Habitat& hab, const Field& W) {
  const auto& g = W.grid();
  const Stencil s = k.quadrature_weights(g.spacing());
  const auto n = static_cast<std::ptrdiff_t>(W.size());
  double worst = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s.weights.size(); ++j) {
      const std::ptrdiff_t src = i - (s.first + static_cast<std::ptrdiff_t>(j));
      double v = 0.0;
      if (src < 0) {
        v = hab.limit(Side::minus, W[0]);
      } else if (src >= n) {
        v = hab.limit(Side::plus, W[W.size() - 1]);
      } else {
        v = hab(g.x(src), W[static_cast<std::size_t>(src)]);
      }
      acc += s.weights[j] * v;
    }
    worst = std::max(worst, std::abs(acc - W[static_cast<std::size_t>(i)]));
  }
  return worst;
}

}  // namespace

TEST_CASE("classification of synthetic fields") {
  const SpatialGrid g(-50.0, 50.0, 1001);
  const FixedPointOptions opts;
  auto cls = [&](const Field& W, std::optional<double> u_star) {
    return classify(W, tail_means(W, opts.tail_fraction), u_star, opts);
  };
  CHECK(cls(Field::constant(g, 0.0), 1.0) == Classification::zero);
  CHECK(cls(Field::constant(g, 1e-9), 1.0) == Classification::zero);
  CHECK(cls(sample(g, [](double x) { return 1.0 / (1.0 + std::exp(-x)); }), 1.0) == Classification::front);
  // a front toward the wrong level is not a front
  CHECK(cls(sample(g, [](double x) { return 2.0 / (1.0 + std::exp(-x)); }), 1.0) == Classification::other);
  CHECK(cls(sample(g, [](double x) { return 1.0 / (1.0 + std::exp(-x)); }), std::nullopt) == Classification::other);
  CHECK(cls(fixtures::bump(g, 3.0, 5.0, 4.0), 1.0) == Classification::pulse);
  CHECK(cls(Field::constant(g, 0.5), 1.0) == Classification::other);
  CHECK(to_string(Classification::pulse) == "pulse");

  const Tails t = tail_means(sample(g, [](double x) { return x; }), 0.01);
  // 11 points on each side: means -49.5 and 49.5
  CHECK(t.minus == doctest::Approx(-49.5));
  CHECK(t.plus == doctest::Approx(49.5));
}

TEST_CASE("Beverton-Holt fixed point is a front") {
  const SpatialGrid g = SpatialGrid::with_spacing(-30.0, 60.0, 0.1);
  const Habitat hab = fixtures::beverton_holt_habitat();
  const Kernel k = fixtures::standard_kernel();
  const EvolutionOp op(k, hab, g);
  const FixedPointResult r = solve_from_cap(op, hab.caps().front(), {1e-11, 5000});
  CHECK(r.converged);
  CHECK(r.residual < 1e-11);
  CHECK(independent_residual(k, hab, r.W) < 1e-10);
  CHECK(r.classification == Classification::front);
  CHECK(r.tail_plus == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.tail_minus < 1e-6);
  // increasing habitat quality gives an increasing profile
  for (std::size_t i = 1; i < r.W.size(); ++i) REQUIRE(r.W[i] >= r.W[i - 1] - 1e-12);
  // the maximal solution dominates every other cap orbit limit
  const FixedPointResult smaller = solve_from_cap(op, 1.0, {1e-11, 5000});
  CHECK(sup_norm_diff(smaller.W, r.W) < 1e-9);
}

TEST_CASE("monotone iteration needs a monotone habitat") {
  const SpatialGrid g(-10.0, 10.0, 201);
  const Habitat ricker = product_habitat("ricker", constant_coefficient(3.0), Nonlinearity::ricker);
  const EvolutionOp op(fixtures::standard_kernel(), ricker, g);
  CHECK_THROWS_AS(solve_from_cap(op, 1.0), HypothesisViolation);
  CHECK_THROWS_AS(solve_from_cap(EvolutionOp(fixtures::standard_kernel(), counterexample_h(1.0), g), 0.0),
                  InvalidArgument);
}

TEST_CASE("solve_in_interval") {
  const SpatialGrid g = SpatialGrid::with_spacing(-30.0, 60.0, 0.1);
  const Habitat hab = fixtures::beverton_holt_habitat();
  const EvolutionOp op(fixtures::standard_kernel(), hab, g);
  SUBCASE("a small bump subsolution") {
    // 0.01 bump sits where R = e, far from saturation, and grows under Q
    const Field lower = fixtures::bump(g, 30.0, 3.0, 0.01);
    const FixedPointResult r = solve_in_interval(op, lower, 2.0);
    for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(r.W[i] >= lower[i]);
    CHECK(r.classification == Classification::front);
  }
  SUBCASE("a supersolution is rejected") {
    CHECK_THROWS_AS(solve_in_interval(op, Field::constant(g, 0.5), 2.0), HypothesisViolation);
  }
  SUBCASE("cap below the lower field") {
    CHECK_THROWS_AS(solve_in_interval(op, fixtures::bump(g, 30.0, 3.0, 0.01), 0.001), InvalidArgument);
    CHECK_THROWS_AS(solve_in_interval(op, Field::constant(SpatialGrid(0.0, 1.0, 11), 0.0), 2.0), GridMismatch);
  }
}

TEST_CASE("exponential tail check") {
  const SpatialGrid g(-10.0, 10.0, 401);
  const Field fast = sample(g, [](double x) { return 3.0 * std::exp(2.0 * x); });
  const TailCheck a = exponential_tail_check(fast, 2.0);
  CHECK(a.bounded);
  CHECK(a.A == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(exponential_tail_check(fast, 1.0).bounded);
  const Field slow = sample(g, [](double x) { return std::exp(0.5 * x); });
  CHECK_FALSE(exponential_tail_check(slow, 2.0).bounded);
  CHECK(exponential_tail_check(Field::constant(g, 0.0), 2.0).bounded);
  CHECK_THROWS_AS(exponential_tail_check(fast, 0.0), InvalidArgument);
}

TEST_CASE("nonexistence certificate") {
  const Kernel k = counterexample_kernel();
  const SpatialGrid g = SpatialGrid::with_spacing(-30.0, 30.0, 0.05);
  SUBCASE("granted for a linearly controlled habitat with negative leftward speed") {
    const Habitat hab = counterexample_h(1.0);
    const LinearEnvelope env = build_envelope(hab, 0.1, hab.caps().back());
    const NonexistenceCertificate c = nonexistence_certificate(EvolutionOp(k, hab, g), env, k, 0.3);
    CHECK(c.granted);
    CHECK(c.refusal.empty());
    // upper operator (e + 0.1) k with M(-mu) = e^{-2 mu + mu^2/4}
    const double expected = -2.0 + std::sqrt(std::log(std::numbers::e + 0.1));
    CHECK(c.c_star_minus_L == doctest::Approx(expected).epsilon(1e-8));
    REQUIRE(c.decay.has_value());
    CHECK(c.decay->lambda_mu < c.decay->bound);
    CHECK(c.decay->bound < 1.0);
    CHECK(c.final_sup < 1e-8);
    REQUIRE(c.tail.has_value());
    CHECK(c.tail->bounded);
    CHECK(c.scope == "evidence at truncation scale");
  }
  SUBCASE("refused without linear control") {
    const Habitat hab = counterexample_h(2.0 * std::numbers::e);
    const LinearEnvelope env = build_envelope(hab, 0.1, hab.caps().back());
    const NonexistenceCertificate c = nonexistence_certificate(EvolutionOp(k, hab, g), env, k, 0.3);
    CHECK_FALSE(c.granted);
    CHECK(c.refusal.find("linearly controlled") != std::string::npos);
  }
  SUBCASE("refused with a nonnegative leftward speed") {
    const Habitat hab = fixtures::beverton_holt_habitat();
    const LinearEnvelope env = build_envelope(hab, 0.1, hab.caps().back());
    const NonexistenceCertificate c =
        nonexistence_certificate(EvolutionOp(fixtures::standard_kernel(), hab, g), env, fixtures::standard_kernel(), 0.3);
    CHECK_FALSE(c.granted);
    CHECK(c.c_star_minus_L > 0.0);
    CHECK(c.refusal.find("leftward speed") != std::string::npos);
  }
}

TEST_CASE("pulse of the localized habitat") {
  const Kernel k = counterexample_kernel();
  const SpatialGrid g = counterexample_grid();
  const double beta0 = find_beta0(k, g);
  const Habitat hab = counterexample_g(beta0);
  const FixedPointResult r = solve_from_cap(EvolutionOp(k, hab, g), hab.caps().front(), {1e-10, 5000});
  CHECK(r.converged);
  CHECK(r.classification == Classification::pulse);
  CHECK(independent_residual(k, hab, r.W) < 1e-9);
  CHECK(r.W.max() > 1.0);
  CHECK(r.tail_minus < 1e-8);
  CHECK(r.tail_plus < 1e-8);
  // below the spectral threshold the only fixed point is zero
  const Habitat weak = counterexample_g(0.5 * beta0);
  const FixedPointResult z = solve_from_cap(EvolutionOp(k, weak, g), weak.caps().front(), {1e-10, 5000});
  CHECK(z.classification == Classification::zero);
}
