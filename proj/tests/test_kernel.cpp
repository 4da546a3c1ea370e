#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ide/errors.hpp"
#include "ide/kernel.hpp"

using namespace ide;

namespace {

// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

double gaussian_pdf(double y, double m, double v) {
  return std::exp(-(y - m) * (y - m) / (2.0 * v)) / std::sqrt(2.0 * std::numbers::pi * v);
}

}  // namespace

TEST_CASE("gaussian mgf golden values") {
  // k(y) = e^{-(y-2)^2} / sqrt(pi): mean 2, variance 1/2, M(mu) = exp(2 mu + mu^2 / 4)
  const Kernel k = Kernel::gaussian(2.0, 0.5);
  CHECK(k.mgf(-2.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-14));
  CHECK(k.mgf(-2.0) == doctest::Approx(0.0497871).epsilon(1e-6));
  CHECK(k.mgf(1.0) == doctest::Approx(9.48774).epsilon(1e-6));

  for (double mu : {-3.0, -1.0, 0.5, 2.0}) {
    const double direct = simpson([&](double y) { return std::exp(mu * y) * std::exp(-(y - 2) * (y - 2)) / std::sqrt(std::numbers::pi); },
                                  -20.0, 24.0, 20000);
    CHECK(k.mgf(mu) == doctest::Approx(direct).epsilon(1e-10));
    // slope of ln M is the tilted mean 2 + mu/2
    CHECK(k.log_mgf(mu).slope == doctest::Approx(2.0 + 0.5 * mu));
  }
  CHECK(k.mgf(0.0) == 1.0);
}

TEST_CASE("laplace mgf and moment domain") {
  const Kernel k = Kernel::laplace(2.0, 0.5);
  const auto [lo, hi] = k.moment_domain();
  CHECK(lo == -2.0);
  CHECK(hi == 2.0);
  for (double mu : {-1.5, -0.3, 0.7, 1.8}) {
    const double direct = simpson([&](double y) { return std::exp(mu * y - 2.0 * std::abs(y - 0.5)); }, 0.5, 400.0, 1000000) +
                          simpson([&](double y) { return std::exp(mu * y - 2.0 * std::abs(y - 0.5)); }, -400.0, 0.5, 1000000);
    CHECK(k.mgf(mu) == doctest::Approx(direct).epsilon(1e-8));
  }
  CHECK_THROWS_AS(k.mgf(2.0), MomentDivergence);
  CHECK_THROWS_AS(k.log_mgf(-2.5), MomentDivergence);
}

TEST_CASE("tail mass") {
  const Kernel k = Kernel::gaussian(0.0, 1.0);
  CHECK(k.tail_mass(3.0) == doctest::Approx(std::erfc(3.0 / std::sqrt(2.0))).epsilon(1e-12));
  const Kernel l = Kernel::laplace(1.0);
  CHECK(l.tail_mass(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("quadrature mgf agrees with closed form on gaussians") {
  for (const Kernel& k : {Kernel::gaussian(0.0, 1.0), Kernel::gaussian(2.0, 0.5), Kernel::gaussian(-1.0, 3.0)}) {
    for (double h : {0.05, 0.01}) {
      for (double mu = -3.0; mu <= 3.0; mu += 0.5) {
        const double exact = k.log_mgf(mu).value;
        const double quad = k.log_mgf_quadrature(mu, h).value;
        REQUIRE(std::abs(std::exp(quad - exact) - 1.0) < 1e-8);
        REQUIRE(k.log_mgf_quadrature(mu, h).slope == doctest::Approx(k.log_mgf(mu).slope).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("mgf is log-convex") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const Kernel& k : {Kernel::gaussian(1.0, 2.0), Kernel::laplace(1.5, -0.2), Kernel::tabulated({0.0, 1.0, 3.0}, {1.0, 2.0, 0.0})}) {
    const auto [lo, hi] = k.moment_domain();
    const double a = std::max(-3.0, 0.95 * lo), b = std::min(3.0, 0.95 * hi);
    for (int i = 0; i < 300; ++i) {
      const double m1 = a + (b - a) * U(rng), m2 = a + (b - a) * U(rng), t = U(rng);
      const double lhs = k.mgf(t * m1 + (1 - t) * m2);
      const double rhs = std::pow(k.mgf(m1), t) * std::pow(k.mgf(m2), 1 - t);
      REQUIRE(lhs <= rhs * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("quadrature weights") {
  const Kernel k = Kernel::gaussian(2.0, 0.5);
  const Stencil s = k.quadrature_weights(0.05);
  double sum = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < s.weights.size(); ++i) {
    REQUIRE(s.weights[i] >= 0.0);
    sum += s.weights[i];
    mean += s.weights[i] * s.offset(i);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(s.raw_mass == doctest::Approx(1.0).epsilon(1e-10));
  // default radius |mean| + 8 sd, centred at zero
  CHECK(k.truncation_radius() == doctest::Approx(2.0 + 8.0 * std::sqrt(0.5)));
  CHECK(s.offset(0) >= -k.truncation_radius() - 1e-12);

  // weights are the sampled density
  const Stencil u = Kernel::gaussian(0.0, 1.0).quadrature_weights(0.1);
  const std::size_t mid = static_cast<std::size_t>(-u.first);
  CHECK(u.weights[mid] == doctest::Approx(0.1 * gaussian_pdf(0.0, 0.0, 1.0) / u.raw_mass));
}

TEST_CASE("truncation errors") {
  CHECK_THROWS_AS(Kernel::gaussian(0.0, 1.0, 3.0).quadrature_weights(0.1), TruncationError);
  CHECK_THROWS_AS(Kernel::gaussian(0.0, 0.001).quadrature_weights(0.5), TruncationError);
  CHECK_THROWS_AS(Kernel::gaussian(0.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(Kernel::laplace(0.0), InvalidArgument);
  CHECK_THROWS_AS(Kernel::gaussian(0.0, 1.0).quadrature_weights(0.0), InvalidArgument);
}

TEST_CASE("tabulated kernels") {
  const Kernel k = Kernel::tabulated({-1.0, 0.0, 1.0}, {0.0, 2.0, 0.0});
  CHECK(k.density(0.0) == doctest::Approx(1.0));  // normalized hat
  CHECK(k.density(0.5) == doctest::Approx(0.5));
  CHECK(k.density(2.0) == 0.0);
  CHECK(k.mgf(0.0) == doctest::Approx(1.0));
  // hat on [-1,1]: M(mu) = 2 (cosh mu - 1) / mu^2, trapezoid over three nodes is exact only at mu = 0
  const Stencil s = k.quadrature_weights(0.01);
  double sum = 0.0;
  for (double w : s.weights) sum += w;
  CHECK(sum == doctest::Approx(1.0));
  CHECK_THROWS_AS(Kernel::tabulated({0.0, 0.0}, {1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(Kernel::tabulated({0.0, 1.0}, {1.0, -1.0}), InvalidArgument);
  CHECK_THROWS_AS(Kernel::tabulated({0.0}, {1.0}), InvalidArgument);

  const std::string path = (std::filesystem::temp_directory_path() / "idespread_kernel_table_test.csv").string();
  {
    std::ofstream os(path);
    os << "y,k\n-1,0\n0,1\n1,0\n";
  }
  const Kernel f = Kernel::from_csv(path);
  CHECK(f.density(0.0) == doctest::Approx(1.0));
  CHECK(f.describe().find("tabulated") != std::string::npos);
  std::filesystem::remove(path);
}
