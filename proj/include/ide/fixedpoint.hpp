#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ide/evolution.hpp"
#include "ide/speeds.hpp"

namespace ide {

enum class Classification { zero, pulse, front, other };
std::string_view to_string(Classification c);

struct FixedPointOptions {
  double tol = 1e-8;
  int max_iters = 5000;
  /// max W below this counts as the zero solution.
  double zero_threshold = 1e-8;
  /// Fraction of the grid on each side averaged into tail_minus / tail_plus.
  double tail_fraction = 0.05;
  /// Relative closeness for the front / pulse tests.
  double relative_threshold = 1e-2;
  /// Allowed increase per step of the monotone orbit, relative to max(1, cap).
  double monotone_slack = 1e-12;
};

struct FixedPointResult {
  Field W;
  double residual = 0.0;  ///< sup |Q[W] - W|, recomputed after the loop
  double tail_minus = 0.0;
  double tail_plus = 0.0;
  Classification classification = Classification::other;
  int iterations = 0;
  bool converged = false;
};

struct Tails {
  double minus = 0.0;
  double plus = 0.0;
};
Tails tail_means(const Field& W, double fraction);

/// `u_star` is the positive equilibrium of f_+ when one exists.
Classification classify(const Field& W, const Tails& tails, std::optional<double> u_star, const FixedPointOptions& opts);

/// Monotone iteration Q^n[cap] -> maximal fixed point in [0, cap]. The orbit must be
/// pointwise nonincreasing; a violation throws MonotonicityViolation.
FixedPointResult solve_from_cap(const EvolutionOp& op, double cap, const FixedPointOptions& opts = {});

/// Fixed point in the order interval [lower, cap] where lower is a subsolution (Q[lower] >= lower).
FixedPointResult solve_in_interval(const EvolutionOp& op, const Field& lower, double cap,
                                   const FixedPointOptions& opts = {});

struct TailCheck {
  bool bounded = true;
  double A = 0.0;  ///< least A with W(x) <= A e^{mu x} on the left half-grid
};

/// Observable part of an exponential left-tail bound W(x) <= A e^{mu x}: the ratio
/// W(x) e^{-mu x} must not grow toward the left edge.
TailCheck exponential_tail_check(const Field& W, double mu);

struct CertificateOptions {
  FixedPointOptions solver{1e-10, 500};
  /// Sup-norm below which the cap iteration counts as collapsed to zero.
  double collapse_threshold = 1e-8;
  SpeedOptions speed;
};

struct NonexistenceCertificate {
  bool granted = false;
  std::string refusal;  ///< reason when not granted
  double c_star_minus_L = 0.0;
  std::optional<DecayReport> decay;
  std::optional<FixedPointResult> corroboration;
  std::optional<TailCheck> tail;
  double final_sup = 0.0;
  /// Always "evidence at truncation scale": exponential tails cannot be confirmed on a finite grid.
  std::string scope = "evidence at truncation scale";
};

/// Nonexistence of nontrivial fixed points: linear control, a negative leftward speed for the
/// constant-coefficient upper operator with coefficient R(+inf), and cap iteration collapsing to zero.
NonexistenceCertificate nonexistence_certificate(const EvolutionOp& op, const LinearEnvelope& env, const Kernel& k,
                                                 double eps, const CertificateOptions& opts = {});

}  // namespace ide
