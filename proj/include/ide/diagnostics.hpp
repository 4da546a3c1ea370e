#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ide/evolution.hpp"

namespace ide {

struct FrontTrace {
  double level = 0.0;
  std::vector<int> steps;
  /// Leftmost / rightmost crossing of the level set {u >= level}; empty when absent.
  std::vector<std::optional<double>> x_minus;
  std::vector<std::optional<double>> x_plus;
  std::vector<double> max_value;
};

FrontTrace track_front(const Trajectory& traj, double level);

struct SpeedFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Least-squares slope of x_plus against the step index, using steps >= burn_in.
SpeedFit estimate_speed(const FrontTrace& trace, int burn_in);

enum class Verdict { pass, fail, inconclusive };
std::string_view to_string(Verdict v);
Verdict combine(Verdict a, Verdict b);

struct GapSeries {
  std::string name;
  std::vector<int> steps;
  std::vector<double> gap;
  /// The finite window was cut by the truncation edge.
  std::vector<bool> clipped;
  /// No grid point fell inside the window.
  std::vector<bool> empty;
  double tolerance = 0.0;
  double tail_max = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

struct GapOptions {
  double tolerance = 1e-3;
  /// Fraction of the trailing snapshots whose maximum decides the verdict.
  double tail_fraction = 0.1;
};

struct UpwardConvergence {
  GapSeries window;  ///< |u_n - u*| over n [max{eps, -c_- + eps}, c_+ - eps]
  GapSeries left;    ///< u_n over x <= -n eps
  Verdict verdict = Verdict::inconclusive;
};

UpwardConvergence upward_convergence(const Trajectory& traj, double u_star, double eps, double c_plus, double c_minus,
                                     const GapOptions& window_opts = {}, const GapOptions& left_opts = {});

struct Annihilation {
  double support_edge = 0.0;  ///< rightmost x with u_0(x) > 0
  GapSeries ahead;            ///< max u_n over x >= support_edge + n max{eps, c_+ + eps}
  std::optional<GapSeries> uniform;  ///< when c_+ < 0: max u_n over x >= support_edge
  Verdict verdict = Verdict::inconclusive;
};

Annihilation annihilation(const Trajectory& traj, double eps, double c_plus, const GapOptions& opts = {});

struct Attractivity {
  GapSeries first;
  GapSeries second;
  bool theory_supported = true;
  Verdict verdict = Verdict::inconclusive;
};

/// sup over x <= n (c_+ - eps) of |u_n - W| for two trajectories.
Attractivity attractivity(const Trajectory& a, const Trajectory& b, const Field& W, double eps, double c_plus,
                          bool theory_supported, const GapOptions& opts = {});

}  // namespace ide
