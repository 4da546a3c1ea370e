#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ide/fixedpoint.hpp"

namespace ide {

struct SpectralReport {
  double beta = 0.0;
  double rho = 0.0;
  int iterations = 0;
  Field eigenfield;       ///< positive, sup-normalized
  double residual = 0.0;  ///< |L v - rho v|_inf / |v|_inf
};

struct PowerOptions {
  double tol = 1e-12;
  double residual_tol = 1e-10;
  int max_iters = 20000;
};

/// Perron root of the discretized positive operator v -> \int R(x-y) v(x-y) k(y) dy
/// by power iteration from the all-ones vector.
SpectralReport power_radius(const std::function<double(double)>& R, const Kernel& k, const SpatialGrid& grid,
                            const PowerOptions& opts = {});

/// Same, with R = beta e^{-x^2}. The grid must be wide enough that e^{-x^2} < 1e-12 at both edges.
SpectralReport power_radius(double beta, const Kernel& k, const SpatialGrid& grid, const PowerOptions& opts = {});

/// beta0 = (1 + margin) / rho(L_1), checked to give rho(L_beta0) > 1.
double find_beta0(const Kernel& k, const SpatialGrid& grid, double margin = 0.25, const PowerOptions& opts = {});

/// The dispersal kernel e^{-(x-2)^2} / sqrt(pi) of the counterexample.
Kernel counterexample_kernel();
/// Default grid for the counterexample: [-30, 30] with spacing 0.05.
SpatialGrid counterexample_grid();

struct CounterexampleOptions {
  double margin = 0.25;
  PowerOptions power;
  FixedPointOptions solver{1e-10, 5000};
  SpeedOptions speed;
  std::vector<double> linearity_betas{0.5, 1.0, 2.0, 4.0};
};

struct CounterexampleReport {
  // (a) limiting speeds of h
  SpeedReport speeds_h;
  // (b) spectral radius and beta0
  double rho_L1 = 0.0;
  double beta0 = 0.0;
  double rho_beta0 = 0.0;
  double linearity_error = 0.0;
  std::optional<SpectralReport> spectral;
  // (c) pulse fixed point of g
  std::optional<FixedPointResult> lower;
  // (c') g at beta0 / 2 collapses
  std::optional<FixedPointResult> half_beta;
  // (d) front fixed point of h above the pulse
  std::optional<FixedPointResult> upper;
  double ordering_gap = 0.0;  ///< min(W_upper - W_lower); >= 0 when ordered
  // (e) contrast
  bool h_linear_controlled = true;
  bool contrast_holds = false;
  std::string statement;
};

/// End-to-end reproduction: speeds of h, beta0, the pulse of g, the front of h above it.
/// A failing stage throws Error prefixed with its label.
CounterexampleReport counterexample_suite(const SpatialGrid& grid, const CounterexampleOptions& opts = {});

}  // namespace ide
