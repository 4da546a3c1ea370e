#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ide/errors.hpp"
#include "ide/grid.hpp"

using namespace ide;

TEST_CASE("grid geometry") {
  const SpatialGrid g(-1.0, 1.0, 5);
  CHECK(g.size() == 5);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.x(0) == -1.0);
  CHECK(g.x(4) == doctest::Approx(1.0));
  CHECK_THROWS_AS(SpatialGrid(1.0, 1.0, 5), InvalidArgument);
  CHECK_THROWS_AS(SpatialGrid(0.0, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS(SpatialGrid(0.0, INFINITY, 3), InvalidArgument);

  const auto w = SpatialGrid::with_spacing(-30.0, 30.0, 0.05);
  CHECK(w.size() == 1201);
  CHECK(w.spacing() == doctest::Approx(0.05).epsilon(1e-14));
  CHECK_THROWS_AS(SpatialGrid::with_spacing(0.0, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("field validation") {
  const SpatialGrid g(0.0, 1.0, 3);
  CHECK_THROWS_AS(Field(g, {1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(Field(g, {1.0, NAN, 2.0}), NonFiniteValue);
  try {
    Field(g, {1.0, 2.0, INFINITY});
    FAIL("expected NonFiniteValue");
  } catch (const NonFiniteValue& e) {
    CHECK(e.index() == 2);
  }
  const Field f = Field::constant(g, 0.25);
  CHECK(f.max() == 0.25);
  CHECK(f.min() == 0.25);
}

TEST_CASE("eval interpolates linearly and extends by constants") {
  const SpatialGrid g(0.0, 2.0, 3);
  const Field f(g, {1.0, 3.0, 2.0});
  CHECK(eval(f, 0.5) == doctest::Approx(2.0));
  CHECK(eval(f, 1.5) == doctest::Approx(2.5));
  CHECK(eval(f, -7.0) == 1.0);
  CHECK(eval(f, 9.0) == 2.0);
}

TEST_CASE("eval is exact at nodes and order preserving") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  const SpatialGrid g(-10.0, 10.0, 301);
  std::vector<double> a(g.size()), b(g.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = U(rng);
    b[i] = a[i] + std::abs(U(rng));
  }
  const Field fa(g, a), fb(g, b);
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(eval(fa, g.x(static_cast<std::ptrdiff_t>(i))) == a[i]);
  for (int k = 0; k < 2000; ++k) {
    const double x = 4.0 * U(rng);
    REQUIRE(eval(fa, x) <= eval(fb, x));
  }
}

TEST_CASE("windowed sup norms") {
  const SpatialGrid g(0.0, 4.0, 5);
  const Field a(g, {0.0, 1.0, 5.0, 1.0, 0.0});
  const Field b = Field::constant(g, 0.0);

  auto w = sup_diff_on(a, b, 0.5, 1.5);
  CHECK(w.value == 1.0);
  CHECK(w.points == 1);
  CHECK_FALSE(w.empty);

  w = sup_diff_on(a, b, 1.2, 1.8);
  CHECK(w.empty);
  CHECK(w.value == 0.0);

  w = sup_diff_on(a, b, 10.0, 20.0);
  CHECK(w.empty);

  // windows reaching past the grid are clipped to it
  CHECK(sup_diff_on(a, b, -100.0, 100.0).value == 5.0);
  CHECK(sup_on(a, -INFINITY, 1.0).value == 1.0);
  CHECK(sup_norm_diff(a, b) == 5.0);

  CHECK_THROWS_AS(sup_diff_on(a, b, 2.0, 1.0), InvalidArgument);
  const Field other = Field::constant(SpatialGrid(0.0, 4.0, 6), 0.0);
  CHECK_THROWS_AS(sup_diff_on(a, other, 0.0, 1.0), GridMismatch);
  CHECK_THROWS_AS(sup_norm_diff(a, other), GridMismatch);
}

TEST_CASE("window sup never exceeds global sup") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const SpatialGrid g(-5.0, 5.0, 101);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> a(g.size()), b(g.size());
    for (auto& v : a) v = U(rng);
    for (auto& v : b) v = U(rng);
    const Field fa(g, a), fb(g, b);
    double lo = 8.0 * U(rng), hi = 8.0 * U(rng);
    if (lo > hi) std::swap(lo, hi);
    REQUIRE(sup_diff_on(fa, fb, lo, hi).value <= sup_norm_diff(fa, fb));
  }
}

TEST_CASE("window indices include endpoints up to rounding") {
  const SpatialGrid g(-1.0, 1.0, 21);
  auto [a, b] = window_indices(g, -0.3, 0.3);
  CHECK(a == 7);
  CHECK(b == 14);
  std::tie(a, b) = window_indices(g, 5.0, 6.0);
  CHECK(a == b);
}

TEST_CASE("field CSV round trip is exact") {
  const SpatialGrid g(-2.0, 3.0, 11);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-0.3 * static_cast<double>(i)) / 3.0;
  const Field f(g, v);
  std::stringstream ss;
  write_field_csv(ss, f);
  CHECK(ss.str().rfind("x,u\n", 0) == 0);
  const Field back = read_field_csv(ss);
  CHECK(back.grid() == g);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(back[i] == v[i]);
}

TEST_CASE("xy CSV reader") {
  std::istringstream with_header("y,density\n-1,0\n0,1\n1,0\n");
  auto cols = read_xy_csv(with_header);
  CHECK(cols.x.size() == 3);
  CHECK(cols.y[1] == 1.0);
  std::istringstream bare("0 1\n1 2\n");
  cols = read_xy_csv(bare);
  CHECK(cols.x.size() == 2);
  std::istringstream bad("x,u\n1,\n");
  CHECK_THROWS_AS(read_xy_csv(bad), Error);
  std::istringstream nonuniform("x,u\n0,1\n1,1\n3,1\n");
  CHECK_THROWS_AS(read_field_csv(nonuniform), InvalidArgument);
}
