#include "ide/properties.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ide/diagnostics.hpp"
#include "ide/errors.hpp"

namespace ide {

namespace fixtures {

Habitat beverton_holt_habitat() { return beverton_holt(0.5, std::numbers::e, 1.0, 1.0); }

Kernel standard_kernel() { return Kernel::gaussian(0.0, 1.0); }

SpatialGrid beverton_holt_grid() { return SpatialGrid::with_spacing(-60.0, 240.0, 0.1); }

SpatialGrid translation_grid() { return SpatialGrid::with_spacing(-100.0, 100.0, 0.1); }

Field bump(const SpatialGrid& grid, double center, double width, double height) {
  if (!(width > 0.0) || !(height >= 0.0)) throw InvalidArgument("bump needs width > 0 and height >= 0");
  return sample(grid, [=](double x) {
    const double z = (x - center) / width;
    if (std::abs(z) >= 1.0) return 0.0;
    const double c = std::cos(0.5 * std::numbers::pi * z);
    return height * c * c;
  });
}

}  // namespace fixtures

namespace {

template <class... Ts>
std::string cat(const Ts&... xs) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << xs);
  return os.str();
}

struct Outcome {
  bool passed;
  std::string detail;
};

class Battery {
 public:
  explicit Battery(const PropertyOptions& opts) : opts_(opts), rng_(opts.seed) {}

  bool wants(const std::string& module) const {
    return opts_.modules.empty() || std::find(opts_.modules.begin(), opts_.modules.end(), module) != opts_.modules.end();
  }

  template <class Fn>
  void run(const std::string& module, const std::string& name, Fn&& fn) {
    if (!wants(module)) return;
    const auto t0 = std::chrono::steady_clock::now();
    PropertyResult r{module, name, false, "", 0.0};
    try {
      Outcome o = fn();
      r.passed = o.passed;
      r.detail = std::move(o.detail);
    } catch (const std::exception& e) {
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results_.push_back(std::move(r));
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Field random_field(const SpatialGrid& grid, double lo, double hi) {
    std::vector<double> v(grid.size());
    for (double& x : v) x = uniform(lo, hi);
    return Field(grid, std::move(v));
  }

  std::vector<PropertyResult> take() { return std::move(results_); }

 private:
  const PropertyOptions& opts_;
  std::mt19937_64 rng_;
  std::vector<PropertyResult> results_;
};

Field scaled(const Field& u, double a) {
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& x : v) x *= a;
  return Field(u.grid(), std::move(v));
}

// Largest positive excess a - b, 0 when a <= b everywhere.
double excess(const Field& a, const Field& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, a[i] - b[i]);
  return worst;
}

struct NamedOp {
  std::string label;
  EvolutionOp op;
};

std::vector<NamedOp> evolution_fixtures(double beta0) {
  std::vector<NamedOp> ops;
  ops.push_back({"beverton_holt", EvolutionOp(fixtures::standard_kernel(), fixtures::beverton_holt_habitat(),
                                              SpatialGrid::with_spacing(-40.0, 40.0, 0.1))});
  ops.push_back({"counterexample_h", EvolutionOp(counterexample_kernel(), counterexample_h(beta0), counterexample_grid())});
  ops.push_back({"counterexample_g", EvolutionOp(counterexample_kernel(), counterexample_g(beta0), counterexample_grid())});
  return ops;
}

std::vector<std::pair<std::string, Habitat>> habitat_fixtures(double beta0) {
  const Coefficient ramp = tabulated_coefficient(
      sample(SpatialGrid(-10.0, 10.0, 201), [](double x) { return 0.5 + 2.5 / (1.0 + std::exp(-x)); }));
  return {
      {"beverton_holt", fixtures::beverton_holt_habitat()},
      {"counterexample_g", counterexample_g(beta0)},
      {"counterexample_h(beta0)", counterexample_h(beta0)},
      {"counterexample_h(1)", counterexample_h(1.0)},
      {"product_plateau", product_habitat("product_plateau", ramp, Nonlinearity::plateau)},
      {"product_bh", product_habitat("product_bh", ramp, Nonlinearity::beverton_holt, 2.0)},
      {"product_ricker", product_habitat("product_ricker", constant_coefficient(2.0), Nonlinearity::ricker)},
  };
}

void grid_properties(Battery& b) {
  const SpatialGrid grid(-10.0, 10.0, 201);
  b.run("grid", "eval_exact_at_nodes", [&]() -> Outcome {
    const Field f = b.random_field(grid, -5.0, 5.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (eval(f, grid.x(static_cast<std::ptrdiff_t>(i))) != f[i]) return {false, cat("mismatch at index ", i)};
    }
    return {true, "201 nodes"};
  });
  b.run("grid", "eval_order_preserving", [&]() -> Outcome {
    for (int trial = 0; trial < 20; ++trial) {
      const Field a = b.random_field(grid, 0.0, 1.0);
      std::vector<double> v(a.values().begin(), a.values().end());
      for (double& x : v) x += b.uniform(0.0, 1.0);
      const Field c(grid, std::move(v));
      for (int k = 0; k < 500; ++k) {
        const double x = b.uniform(-12.0, 12.0);
        if (eval(a, x) > eval(c, x)) return {false, cat("order broken at x = ", x)};
      }
    }
    return {true, "20 pairs x 500 points"};
  });
  b.run("grid", "window_sup_bounded_by_global", [&]() -> Outcome {
    for (int trial = 0; trial < 200; ++trial) {
      const Field a = b.random_field(grid, -1.0, 1.0);
      const Field c = b.random_field(grid, -1.0, 1.0);
      double lo = b.uniform(-15.0, 15.0);
      double hi = b.uniform(-15.0, 15.0);
      if (lo > hi) std::swap(lo, hi);
      if (sup_diff_on(a, c, lo, hi).value > sup_norm_diff(a, c)) return {false, cat("window [", lo, ", ", hi, "]")};
    }
    return {true, "200 windows"};
  });
}

void kernel_properties(Battery& b) {
  const std::vector<std::pair<std::string, Kernel>> kernels = {
      {"gaussian(0,1)", Kernel::gaussian(0.0, 1.0)},
      {"gaussian(2,0.5)", Kernel::gaussian(2.0, 0.5)},
      {"laplace(2,0.5)", Kernel::laplace(2.0, 0.5)},
      {"tabulated", Kernel::tabulated({-1.0, 0.0, 2.0}, {0.0, 1.0, 0.0})},
  };
  b.run("kernel", "mgf_log_convex", [&]() -> Outcome {
    int triples = 0;
    for (const auto& [label, k] : kernels) {
      const auto [lo, hi] = k.moment_domain();
      const double a = std::max(lo * 0.9, -3.0);
      const double c = std::min(hi * 0.9, 3.0);
      for (int i = 0; i < 200; ++i, ++triples) {
        const double m1 = b.uniform(a, c);
        const double m2 = b.uniform(a, c);
        const double t = b.uniform(0.0, 1.0);
        const double lhs = k.log_mgf(t * m1 + (1.0 - t) * m2).value;
        const double rhs = t * k.log_mgf(m1).value + (1.0 - t) * k.log_mgf(m2).value;
        if (lhs > rhs + 1e-12 * (1.0 + std::abs(rhs))) return {false, cat(label, ": mu1 = ", m1, ", mu2 = ", m2, ", t = ", t)};
      }
    }
    return {true, cat(triples, " triples")};
  });
  b.run("kernel", "quadrature_mgf_matches_closed_form", [&]() -> Outcome {
    double worst = 0.0;
    for (const Kernel& k : {kernels[0].second, kernels[1].second, Kernel::gaussian(-1.0, 2.0)}) {
      for (double h : {0.05, 0.02}) {
        for (double mu = -3.0; mu <= 3.0 + 1e-12; mu += 0.25) {
          const double exact = k.log_mgf(mu).value;
          const double quad = k.log_mgf_quadrature(mu, h).value;
          worst = std::max(worst, std::abs(std::expm1(quad - exact)));
        }
      }
    }
    return {worst < 1e-8, cat("max relative error ", worst)};
  });
  b.run("kernel", "weights_nonnegative", [&]() -> Outcome {
    for (const auto& [label, k] : kernels) {
      for (double h : {0.05, 0.02}) {
        const Stencil s = k.quadrature_weights(h);
        for (double w : s.weights) {
          if (!(w >= 0.0)) return {false, label};
        }
      }
    }
    return {true, "4 kernels x 2 spacings"};
  });
}

void habitat_properties(Battery& b, double beta0) {
  const auto habitats = habitat_fixtures(beta0);
  b.run("habitat", "zero_is_fixed", [&]() -> Outcome {
    for (const auto& [label, hab] : habitats) {
      for (int i = 0; i <= 200; ++i) {
        const double x = -50.0 + 0.5 * i;
        if (hab(x, 0.0) != 0.0) return {false, cat(label, " at x = ", x)};
      }
    }
    return {true, cat(habitats.size(), " habitats")};
  });
  b.run("habitat", "envelope_domination", [&]() -> Outcome {
    int audited = 0;
    for (const auto& [label, hab] : habitats) {
      if (!hab.monotone_in_u()) continue;
      const double u_ss = hab.caps().back();
      const LinearEnvelope env = build_envelope(hab, 0.1, u_ss);
      // offset lattice, distinct from the audit run inside build_envelope
      for (int i = 0; i < 200; ++i) {
        const double x = -50.0 + 100.0 * (i + 0.37) / 200.0;
        const double r = env(x);
        for (int j = 1; j <= 200; ++j) {
          const double u = u_ss * (j - 0.5) / 200.0;
          if (hab(x, u) > r * u * (1.0 + 1e-12)) return {false, cat(label, " at (", x, ", ", u, ")")};
        }
      }
      ++audited;
    }
    return {true, cat(audited, " habitats on 200x200")};
  });
  b.run("habitat", "subhomogeneous", [&]() -> Outcome {
    for (const auto& [label, hab] : habitats) {
      if (!hab.subhomogeneous()) continue;
      const double top = hab.caps().back();
      for (int i = 0; i < 2000; ++i) {
        const double x = b.uniform(-30.0, 30.0);
        const double u = b.uniform(0.0, top);
        const double a = b.uniform(0.0, 1.0);
        const double lhs = hab(x, a * u);
        const double rhs = a * hab(x, u);
        if (lhs < rhs - 1e-14 * (1.0 + rhs)) return {false, cat(label, " at x = ", x, ", u = ", u, ", alpha = ", a)};
      }
    }
    return {true, "2000 samples per habitat"};
  });
  b.run("habitat", "limit_fixed_point_residual", [&]() -> Outcome {
    double worst = 0.0;
    for (const auto& [label, hab] : habitats) {
      if (!(hab.d_plus() > 1.0)) continue;
      const double w = limit_fixed_point(hab);
      worst = std::max(worst, std::abs(hab.limit(Side::plus, w) - w));
    }
    return {worst < 1e-10, cat("max |f+(W) - W| = ", worst)};
  });
}

void evolution_properties(Battery& b, double beta0) {
  const auto ops = evolution_fixtures(beta0);
  b.run("evolution", "monotone", [&]() -> Outcome {
    double worst = 0.0;
    for (const auto& [label, op] : ops) {
      const double cap = op.habitat().caps().back();
      for (int pair = 0; pair < 50; ++pair) {
        const Field u = b.random_field(op.grid(), 0.0, cap);
        std::vector<double> v(u.values().begin(), u.values().end());
        for (double& x : v) x = std::min(cap, x + b.uniform(0.0, cap));
        worst = std::max(worst, excess(op.apply(u), op.apply(Field(op.grid(), std::move(v)))));
      }
    }
    return {worst <= 1e-12, cat("50 pairs per habitat, worst violation ", worst)};
  });
  b.run("evolution", "cap_invariance", [&]() -> Outcome {
    for (const auto& [label, op] : ops) {
      for (double cap : op.habitat().caps()) {
        for (int trial = 0; trial < 10; ++trial) {
          const Field out = op.apply(b.random_field(op.grid(), 0.0, cap));
          if (out.min() < 0.0 || out.max() > cap * (1.0 + 1e-12)) {
            return {false, cat(label, ": cap ", cap, " image range [", out.min(), ", ", out.max(), "]")};
          }
        }
      }
    }
    return {true, "10 samples per cap"};
  });
  b.run("evolution", "translation_limit", [&]() -> Outcome {
    const SpatialGrid grid = fixtures::translation_grid();
    const EvolutionOp op(fixtures::standard_kernel(), fixtures::beverton_holt_habitat(), grid);
    const double h = grid.spacing();
    const Field phi = fixtures::bump(grid, 0.0, 5.0, 0.5);
    const Field limit = op.apply_limit(phi, Side::plus);
    std::vector<double> gaps;
    for (double y : {0.0, 20.0, 40.0, 80.0}) {
      const auto shift = static_cast<std::ptrdiff_t>(std::lround(y / h));
      const Field moved = sample(grid, [&](double x) { return phi.at(x - y); });
      const Field image = op.apply(moved);
      double gap = 0.0;
      const auto [first, last] = window_indices(grid, -15.0, 15.0);
      for (std::size_t i = first; i < last; ++i) {
        const auto j = static_cast<std::ptrdiff_t>(i) + shift;
        if (j < 0 || j >= static_cast<std::ptrdiff_t>(grid.size())) return {false, "window left the grid"};
        gap = std::max(gap, std::abs(image[static_cast<std::size_t>(j)] - limit[i]));
      }
      gaps.push_back(gap);
    }
    bool ordered = true;
    for (std::size_t i = 1; i < gaps.size(); ++i) ordered = ordered && gaps[i] <= gaps[i - 1] + 1e-12;
    return {ordered && gaps.back() < 1e-4,
            cat("gaps at y = 0,20,40,80: ", gaps[0], ", ", gaps[1], ", ", gaps[2], ", ", gaps[3])};
  });
  b.run("evolution", "subhomogeneity_transfer", [&]() -> Outcome {
    double worst = 0.0;
    for (const auto& [label, op] : ops) {
      if (!op.habitat().subhomogeneous()) continue;
      const double cap = op.habitat().caps().back();
      for (int trial = 0; trial < 20; ++trial) {
        const Field u = b.random_field(op.grid(), 0.0, cap);
        const double a = b.uniform(0.0, 1.0);
        worst = std::max(worst, excess(scaled(op.apply(u), a), op.apply(scaled(u, a))));
      }
    }
    return {worst <= 1e-12, cat("worst violation ", worst)};
  });
  b.run("evolution", "strict_positivity", [&]() -> Outcome {
    for (const auto& [label, op] : ops) {
      const Field phi = fixtures::bump(op.grid(), 0.0, 1.0, 0.5);
      const Field out = op.apply(phi);
      const Stencil& s = op.stencil();
      const double lo = -1.0 + static_cast<double>(s.first) * s.h + 0.5 * s.h;
      const double hi = 1.0 + static_cast<double>(s.last()) * s.h - 0.5 * s.h;
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = op.grid().x(static_cast<std::ptrdiff_t>(i));
        if (x > lo && x < hi && !(out[i] > 0.0)) return {false, cat(label, ": Q[phi](", x, ") = ", out[i])};
      }
    }
    return {true, "positive on the kernel-shifted support"};
  });
  b.run("evolution", "envelope_domination", [&]() -> Outcome {
    double worst = 0.0;
    for (const auto& [label, op] : ops) {
      const double u_ss = op.habitat().caps().back();
      const LinearEnvelope env = build_envelope(op.habitat(), 0.1, u_ss);
      for (int trial = 0; trial < 20; ++trial) {
        const Field u = b.random_field(op.grid(), 0.0, u_ss);
        const Field upper = apply_linear(env.profile(), op.stencil(), u);
        worst = std::max(worst, excess(op.apply(u), upper) / u_ss);
      }
    }
    return {worst <= 1e-12, cat("worst relative violation ", worst)};
  });
}

void speed_properties(Battery& b) {
  struct Case {
    std::string label;
    double coef;
    Kernel k;
  };
  const std::vector<Case> cases = {
      {"e, gaussian(2,0.5)", std::numbers::e, counterexample_kernel()},
      {"e, gaussian(0,1)", std::numbers::e, Kernel::gaussian(0.0, 1.0)},
      {"2, laplace(2,0.5)", 2.0, Kernel::laplace(2.0, 0.5)},
      {"3, gaussian(-1,2)", 3.0, Kernel::gaussian(-1.0, 2.0)},
  };
  b.run("speeds", "argmin_is_global_on_log_grid", [&]() -> Outcome {
    int checked = 0;
    for (const auto& c : cases) {
      for (Side side : {Side::minus, Side::plus}) {
        const SpeedResult r = spreading_speed(c.coef, c.k, side);
        if (r.attainment != Attainment::interior) continue;
        const double hi = std::min(50.0, 0.999 * std::min(-c.k.moment_domain().first, c.k.moment_domain().second));
        for (int i = 0; i < 100; ++i) {
          const double mu = 1e-4 * std::pow(hi / 1e-4, i / 99.0);
          if (r.c > speed_objective(c.coef, c.k, side, mu) + 1e-12) {
            return {false, cat(c.label, " ", to_string(side), ": objective(", mu, ") below reported minimum")};
          }
        }
        ++checked;
      }
    }
    return {checked > 0, cat(checked, " interior minima")};
  });
  b.run("speeds", "nondecreasing_in_coefficient", [&]() -> Outcome {
    for (const auto& c : cases) {
      for (Side side : {Side::minus, Side::plus}) {
        double prev = -std::numeric_limits<double>::infinity();
        for (double coef : {1.05, 1.5, 2.0, std::numbers::e, 4.0, 8.0}) {
          const double s = spreading_speed(coef, c.k, side).c;
          if (s < prev - 1e-9) return {false, cat(c.label, " ", to_string(side), " at coef ", coef)};
          prev = s;
        }
      }
    }
    return {true, "6 coefficients per kernel and side"};
  });
  b.run("speeds", "quadrature_matches_analytic", [&]() -> Outcome {
    double worst = 0.0;
    SpeedOptions quad;
    quad.path = MgfPath::quadrature;
    for (const auto& c : cases) {
      if (!std::holds_alternative<Kernel::Gaussian>(c.k.form())) continue;
      const SpeedReport a = speed_report(c.coef, c.k);
      const SpeedReport q = speed_report(c.coef, c.k, quad);
      worst = std::max({worst, std::abs(a.c_minus - q.c_minus), std::abs(a.c_plus - q.c_plus)});
    }
    return {worst < 1e-6, cat("max difference ", worst)};
  });
  b.run("speeds", "uc_witness", [&]() -> Outcome {
    const std::vector<Habitat> habitats = {fixtures::beverton_holt_habitat(), counterexample_h(110.0),
                                           counterexample_h(1.0)};
    double least = std::numeric_limits<double>::infinity();
    for (const Habitat& hab : habitats) {
      if (!(hab.d_plus() > 1.0)) continue;
      for (const auto& c : cases) {
        const SpeedReport r = speed_report(hab.d_plus(), c.k);
        least = std::min(least, r.c_plus + r.c_minus);
      }
    }
    return {least > 0.0, cat("min c+ + c- = ", least)};
  });
}

void diagnostics_properties(Battery& b, double beta0) {
  b.run("diagnostics", "front_monotone_for_monotone_orbit", [&]() -> Outcome {
    const SpatialGrid grid = SpatialGrid::with_spacing(-10.0, 100.0, 0.1);
    Trajectory traj;
    for (int n = 0; n <= 50; ++n) {
      traj.snapshots.push_back({n, sample(grid, [n](double x) { return 1.0 / (1.0 + std::exp(x - 1.3 * n)); })});
    }
    for (std::size_t n = 1; n < traj.snapshots.size(); ++n) {
      if (excess(traj.snapshots[n - 1].u, traj.snapshots[n].u) > 0.0) return {false, "fixture is not monotone"};
    }
    const FrontTrace trace = track_front(traj, 0.5);
    for (std::size_t n = 1; n < trace.x_plus.size(); ++n) {
      if (!trace.x_plus[n] || !trace.x_plus[n - 1] || *trace.x_plus[n] < *trace.x_plus[n - 1]) {
        return {false, cat("x+ decreased at step ", n)};
      }
    }
    return {true, "51 snapshots"};
  });
  b.run("diagnostics", "upward_gap_eventually_nonincreasing", [&]() -> Outcome {
    const Kernel k = counterexample_kernel();
    const Habitat h = counterexample_h(beta0);
    const SpatialGrid grid(-300.0, 300.0, 6000);
    const EvolutionOp op(k, h, grid);
    const SpeedReport sp = speed_report(h.d_plus(), k);
    const Trajectory traj = iterate(op, fixtures::bump(grid, 0.0, 2.0, 1.0), 80);
    const UpwardConvergence uc = upward_convergence(traj, limit_fixed_point(h), 0.5, sp.c_plus, sp.c_minus);
    const auto& g = uc.window.gap;
    for (std::size_t i = g.size() / 2; i + 1 < g.size(); ++i) {
      if (g[i + 1] > g[i] + 1e-3) return {false, cat("gap rose at step ", uc.window.steps[i + 1])};
    }
    return {true, cat("final gap ", g.back())};
  });
  b.run("diagnostics", "speed_fit_exact_on_affine_trace", [&]() -> Outcome {
    FrontTrace trace;
    trace.level = 0.5;
    for (int n = 0; n < 60; ++n) {
      trace.steps.push_back(n);
      trace.x_plus.push_back(2.5 * n + 3.0);
      trace.x_minus.push_back(-1.0);
      trace.max_value.push_back(1.0);
    }
    const SpeedFit fit = estimate_speed(trace, 5);
    const double err = std::max(std::abs(fit.slope - 2.5), std::abs(fit.r2 - 1.0));
    return {err < 1e-12, cat("slope ", fit.slope, ", r2 - 1 = ", fit.r2 - 1.0)};
  });
}

void fixedpoint_properties(Battery& b, const CounterexampleReport& suite) {
  const EvolutionOp bh(fixtures::standard_kernel(), fixtures::beverton_holt_habitat(), fixtures::beverton_holt_grid());
  b.run("fixedpoint", "cap_orbit_nonincreasing", [&]() -> Outcome {
    Field u = Field::constant(bh.grid(), bh.habitat().caps().front());
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
      Field next = bh.apply(u);
      worst = std::max(worst, excess(next, u));
      u = std::move(next);
    }
    return {worst <= 1e-12, cat("100 steps, worst increase ", worst)};
  });
  b.run("fixedpoint", "residual_reverified", [&]() -> Outcome {
    const FixedPointOptions opts{1e-10, 5000};
    const FixedPointResult r = solve_from_cap(bh, bh.habitat().caps().front(), opts);
    const double residual = sup_norm_diff(bh.apply(r.W), r.W);
    return {r.converged && residual < opts.tol, cat("independent residual ", residual)};
  });
  b.run("fixedpoint", "counterexample_ordering", [&]() -> Outcome {
    return {suite.ordering_gap >= 0.0, cat("min(W_upper - W_lower) = ", suite.ordering_gap)};
  });
  b.run("fixedpoint", "pulse_of_g", [&]() -> Outcome {
    const auto& w = *suite.lower;
    return {w.W.max() > 1e-3 && w.tail_minus < 1e-4 && w.tail_plus < 1e-4,
            cat("max ", w.W.max(), ", tails ", w.tail_minus, " / ", w.tail_plus)};
  });
  b.run("fixedpoint", "certificate_soundness", [&]() -> Outcome {
    int granted = 0;
    const Kernel k = counterexample_kernel();
    const std::vector<EvolutionOp> ops = {
        EvolutionOp(k, counterexample_h(1.0), counterexample_grid()),
        EvolutionOp(k, counterexample_h(std::numbers::e), counterexample_grid()),
        EvolutionOp(fixtures::standard_kernel(), fixtures::beverton_holt_habitat(), fixtures::beverton_holt_grid()),
    };
    for (const EvolutionOp& op : ops) {
      const Habitat& hab = op.habitat();
      const LinearEnvelope env = build_envelope(hab, 0.1, hab.caps().back());
      const NonexistenceCertificate cert = nonexistence_certificate(op, env, op.kernel(), 0.3);
      if (!cert.granted) continue;
      ++granted;
      if (!(cert.final_sup < 1e-8)) return {false, cat(hab.name(), ": final sup ", cert.final_sup)};
    }
    return {granted > 0, cat(granted, " certificates granted, all collapsed")};
  });
}

void spectral_properties(Battery& b, const CounterexampleReport& suite) {
  b.run("spectral", "radius_linear_in_beta", [&]() -> Outcome {
    return {suite.linearity_error < 1e-8, cat("max relative error ", suite.linearity_error)};
  });
  b.run("spectral", "radius_grid_robust", [&]() -> Outcome {
    const Kernel k = counterexample_kernel();
    const double narrow = power_radius(1.0, k, SpatialGrid::with_spacing(-20.0, 20.0, 0.05)).rho;
    const double wide = power_radius(1.0, k, SpatialGrid::with_spacing(-30.0, 30.0, 0.05)).rho;
    return {std::abs(narrow - wide) < 1e-6, cat("rho [-20,20] = ", narrow, ", [-30,30] = ", wide)};
  });
  b.run("spectral", "suite_ordering", [&]() -> Outcome {
    return {suite.ordering_gap >= 0.0 && suite.lower->W.min() >= 0.0,
            cat("min W_lower ", suite.lower->W.min(), ", min gap ", suite.ordering_gap)};
  });
}

}  // namespace

std::vector<PropertyResult> run_property_battery(const PropertyOptions& opts) {
  Battery b(opts);
  const CounterexampleReport suite = counterexample_suite(counterexample_grid());
  grid_properties(b);
  kernel_properties(b);
  habitat_properties(b, suite.beta0);
  evolution_properties(b, suite.beta0);
  speed_properties(b);
  diagnostics_properties(b, suite.beta0);
  fixedpoint_properties(b, suite);
  spectral_properties(b, suite);
  return b.take();
}

}  // namespace ide
