#pragma once

#include <string_view>

#include "ide/habitat.hpp"
#include "ide/kernel.hpp"

namespace ide {

enum class MgfPath { analytic, quadrature };

/// Where the infimum over mu was found.
enum class Attainment { interior, lower_boundary, upper_boundary };
std::string_view to_string(Attainment a);

struct SpeedOptions {
  double mu_lo = 1e-4;
  double mu_hi = 50.0;
  double mu_tol = 1e-10;
  MgfPath path = MgfPath::analytic;
  /// Lattice step for MgfPath::quadrature.
  double quadrature_step = 0.01;
};

struct SpeedResult {
  double c = 0.0;
  double mu = 0.0;
  Attainment attainment = Attainment::interior;
  int evaluations = 0;
};

struct SpeedReport {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double mu_plus = 0.0;
  double mu_minus = 0.0;
  Attainment attainment_plus = Attainment::interior;
  Attainment attainment_minus = Attainment::interior;
  int evaluations = 0;
};

/// (1/mu) ln[coef * M(+-mu)] for the requested side.
double speed_objective(double coef, const Kernel& k, Side side, double mu, const SpeedOptions& opts = {});

/// c = inf_{mu>0} (1/mu) ln[coef M(+-mu)]: golden-section search, then bisection on the
/// sign of the derivative (the numerator mu (ln M)' - ln(coef M) is nondecreasing in mu).
SpeedResult spreading_speed(double coef, const Kernel& k, Side side, const SpeedOptions& opts = {});
SpeedReport speed_report(double coef, const Kernel& k, const SpeedOptions& opts = {});

/// Speed of the constant-coefficient operator R(+inf) \int u(x-y) k(y) dy.
SpeedResult envelope_speed(const LinearEnvelope& env, const Kernel& k, Side side, const SpeedOptions& opts = {});

struct DecayReport {
  double c_star_minus = 0.0;  ///< leftward speed of the linear operator with coefficient `coef`
  double epsilon = 0.0;
  double mu_eps = 0.0;
  double lambda_mu = 0.0;  ///< coef * M(-mu_eps)
  double bound = 0.0;      ///< e^{(c_star_minus + epsilon) mu_eps}
};

/// mu_eps > 0 with coef M(-mu_eps) < e^{(c + eps) mu_eps} < 1, where c < 0 is the leftward speed.
DecayReport decay_rate(double coef, const Kernel& k, double epsilon, const SpeedOptions& opts = {});

}  // namespace ide
