#include "ide/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ide/errors.hpp"

namespace ide {

SpectralReport power_radius(const std::function<double(double)>& R, const Kernel& k, const SpatialGrid& grid,
                            const PowerOptions& opts) {
  const Stencil stencil = k.quadrature_weights(grid.spacing());
  Field v = Field::constant(grid, 1.0);
  double rq_prev = 0.0;
  SpectralReport out{0.0, 0.0, 0, v, 0.0};
  for (int it = 1; it <= opts.max_iters; ++it) {
    const Field w = apply_linear(R, stencil, v);
    double dot_vw = 0.0;
    double dot_vv = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      dot_vw += v[i] * w[i];
      dot_vv += v[i] * v[i];
    }
    const double rq = dot_vw / dot_vv;
    const double norm = w.max();
    if (!(norm > 0.0)) throw ConvergenceError("power iteration collapsed to zero");
    double res = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) res = std::max(res, std::abs(w[i] - rq * v[i]));
    res /= v.max();
    std::vector<double> next(w.values().begin(), w.values().end());
    for (double& x : next) x /= norm;
    v = Field(grid, std::move(next));
    if (it > 1 && std::abs(rq - rq_prev) <= opts.tol * rq && res <= opts.residual_tol * rq) {
      out.rho = rq;
      out.iterations = it;
      out.residual = res / rq;
      out.eigenfield = v;
      return out;
    }
    rq_prev = rq;
  }
  throw ConvergenceError("power iteration did not converge in " + std::to_string(opts.max_iters) + " iterations");
}

SpectralReport power_radius(double beta, const Kernel& k, const SpatialGrid& grid, const PowerOptions& opts) {
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  const double edge = std::max(std::abs(grid.x_min()), std::abs(grid.x_max()));
  const double inner = std::min(std::abs(grid.x_min()), std::abs(grid.x_max()));
  if (grid.x_min() > 0.0 || grid.x_max() < 0.0 || std::exp(-inner * inner) >= 1e-12) {
    std::ostringstream os;
    os << "grid [" << grid.x_min() << ", " << grid.x_max() << "] too narrow: e^{-x^2} must drop below 1e-12 at both edges";
    throw InvalidArgument(os.str());
  }
  (void)edge;
  auto rep = power_radius([beta](double x) { return beta * std::exp(-x * x); }, k, grid, opts);
  rep.beta = beta;
  return rep;
}

double find_beta0(const Kernel& k, const SpatialGrid& grid, double margin, const PowerOptions& opts) {
  if (!(margin > 0.0)) throw InvalidArgument("margin must be positive");
  const double rho1 = power_radius(1.0, k, grid, opts).rho;
  const double beta0 = (1.0 + margin) / rho1;
  const double check = power_radius(beta0, k, grid, opts).rho;
  if (!(check > 1.0)) throw ConvergenceError("rho(L_beta0) <= 1; spectral estimate unreliable");
  return beta0;
}

Kernel counterexample_kernel() { return Kernel::gaussian(2.0, 0.5); }

SpatialGrid counterexample_grid() { return SpatialGrid::with_spacing(-30.0, 30.0, 0.05); }

CounterexampleReport counterexample_suite(const SpatialGrid& grid, const CounterexampleOptions& opts) {
  CounterexampleReport rep;
  const Kernel k = counterexample_kernel();
  auto stage = [](const char* label, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      throw Error(std::string("stage ") + label + ": " + e.what());
    }
  };

  stage("(a) speeds", [&] {
    rep.speeds_h = speed_report(std::numbers::e, k, opts.speed);
  });

  stage("(b) beta0", [&] {
    rep.rho_L1 = power_radius(1.0, k, grid, opts.power).rho;
    for (double b : opts.linearity_betas) {
      const double rho = power_radius(b, k, grid, opts.power).rho;
      rep.linearity_error = std::max(rep.linearity_error, std::abs(rho - b * rep.rho_L1) / (b * rep.rho_L1));
    }
    rep.beta0 = find_beta0(k, grid, opts.margin, opts.power);
    rep.spectral = power_radius(rep.beta0, k, grid, opts.power);
    rep.rho_beta0 = rep.spectral->rho;
  });

  const Habitat g = counterexample_g(rep.beta0);
  const Habitat h = counterexample_h(rep.beta0);
  rep.h_linear_controlled = h.linear_controlled();

  stage("(c) pulse", [&] {
    const EvolutionOp op(k, g, grid);
    rep.lower = solve_from_cap(op, g.caps().front(), opts.solver);
    if (!rep.lower->converged) throw ConvergenceError("g iteration did not converge");
    if (rep.lower->classification != Classification::pulse) {
      throw Error("fixed point of g is " + std::string(to_string(rep.lower->classification)) + ", expected pulse");
    }
    const Habitat g_half = counterexample_g(0.5 * rep.beta0);
    rep.half_beta = solve_from_cap(EvolutionOp(k, g_half, grid), g_half.caps().front(), opts.solver);
  });

  stage("(d) front", [&] {
    const EvolutionOp op(k, h, grid);
    const double cap = std::max({rep.beta0, rep.lower->W.max(), h.caps().front()});
    rep.upper = solve_in_interval(op, rep.lower->W, cap, opts.solver);
    if (!rep.upper->converged) throw ConvergenceError("h iteration did not converge");
    rep.ordering_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rep.ordering_gap = std::min(rep.ordering_gap, rep.upper->W[i] - rep.lower->W[i]);
    }
  });

  rep.contrast_holds = rep.speeds_h.c_minus < 0.0 && !rep.h_linear_controlled &&
                       rep.upper->classification == Classification::front && rep.upper->W.max() > 0.0;
  std::ostringstream os;
  os.precision(10);
  os << "Q[.;h] has leftward limiting speed " << rep.speeds_h.c_minus << " < 0, yet a nontrivial fixed point exists: "
     << "a front with W(-inf) ~ " << rep.upper->tail_minus << " and W(+inf) ~ " << rep.upper->tail_plus
     << ". h is " << (rep.h_linear_controlled ? "" : "not ") << "linearly controlled (beta0 = " << rep.beta0
     << " exceeds e), so the nonexistence criterion does not apply.";
  rep.statement = os.str();
  return rep;
}

}  // namespace ide
