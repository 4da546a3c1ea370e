#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ide/grid.hpp"

namespace ide {

enum class Side { minus, plus };

std::string_view to_string(Side side);

/// Which structural bound lets a linear envelope R(x) u dominate f near zero.
enum class EnvelopeCondition {
  none,
  global_linearization_bound,  ///< f(x,u) <= d_u f(x,0) u everywhere
  left_asymptotic_bound,       ///< the same bound holds asymptotically as x -> -inf
};

struct HabitatParts {
  std::string name;
  std::function<double(double, double)> f;
  std::function<double(double)> dfdu0;
  std::function<double(double)> f_minus;
  std::function<double(double)> f_plus;
  double d_minus = 0.0;
  double d_plus = 0.0;
  /// Increasing invariant levels: f(x, [0, c]) is contained in [0, c].
  std::vector<double> caps;
  bool monotone_in_u = true;
  bool subhomogeneous = true;
  /// f(x,u) <= d_plus * u for every (x,u).
  bool linear_controlled = false;
  EnvelopeCondition envelope_condition = EnvelopeCondition::none;
};

/// Spatially heterogeneous growth map f(x,u) with its limits f_-, f_+ at -inf and +inf.
class Habitat {
 public:
  explicit Habitat(HabitatParts parts);

  const std::string& name() const { return p_.name; }
  double operator()(double x, double u) const { return p_.f(x, u); }
  double slope_at_zero(double x) const { return p_.dfdu0(x); }
  double limit(Side side, double u) const { return side == Side::plus ? p_.f_plus(u) : p_.f_minus(u); }
  double limit_slope(Side side) const { return side == Side::plus ? p_.d_plus : p_.d_minus; }
  double d_plus() const { return p_.d_plus; }
  double d_minus() const { return p_.d_minus; }
  const std::vector<double>& caps() const { return p_.caps; }
  bool monotone_in_u() const { return p_.monotone_in_u; }
  bool subhomogeneous() const { return p_.subhomogeneous; }
  bool linear_controlled() const { return p_.linear_controlled; }
  EnvelopeCondition envelope_condition() const { return p_.envelope_condition; }

 private:
  HabitatParts p_;
};

/// u e^{-u} on [0,1], 1/e beyond: nondecreasing, slope one at zero, range [0, 1/e].
double plateau_growth(double u);

/// One-dimensional growth shapes n(u) with n(0) = 0, n'(0) = 1.
enum class Nonlinearity { linear, plateau, ricker, beverton_holt };
std::optional<Nonlinearity> parse_nonlinearity(std::string_view name);
std::string_view to_string(Nonlinearity n);

/// Spatial coefficient a(x) with limits at -inf/+inf and its supremum.
struct Coefficient {
  std::function<double(double)> a;
  double minus = 0.0;
  double plus = 0.0;
  double sup = 0.0;
};

Coefficient constant_coefficient(double a);
/// Tabulated profile, linearly interpolated, constant beyond the table.
Coefficient tabulated_coefficient(const Field& profile);

/// f(x,u) = a(x) n(u). `k` parameterizes the beverton_holt shape u / (1 + u/k).
/// Empty `caps` selects a geometric default when the family has one.
Habitat product_habitat(std::string name, Coefficient coef, Nonlinearity shape, double k = 1.0,
                        std::vector<double> caps = {});

/// f(x,u) = R(x) u / (1 + ((R(x)-1)^+ / K) u), R a logistic step from r_minus to r_plus.
Habitat beverton_holt(double r_minus, double r_plus, double K, double steepness, double center = 0.0);

/// g(x,u) = beta e^{-x^2} plateau(u).
Habitat counterexample_g(double beta);
/// h(x,u) = max{beta e^{-x^2}, e - e^{-x}} plateau(u).
Habitat counterexample_h(double beta);
std::pair<Habitat, Habitat> counterexample(double beta);

/// Unique positive root of f_+(u) = u, to 1e-12.
double limit_fixed_point(const Habitat& hab);

/// Linear upper bound f(x,u) <= R(x) u on [0, u_star_star].
class LinearEnvelope {
 public:
  LinearEnvelope(std::function<double(double)> profile, double gamma, double u_star_star, double r_minus_inf,
                 double r_plus_inf)
      : profile_(std::move(profile)),
        gamma_(gamma),
        u_star_star_(u_star_star),
        r_minus_inf_(r_minus_inf),
        r_plus_inf_(r_plus_inf) {}

  double operator()(double x) const { return profile_(x); }
  const std::function<double(double)>& profile() const { return profile_; }
  double gamma() const { return gamma_; }
  double u_star_star() const { return u_star_star_; }
  double limit(Side side) const { return side == Side::plus ? r_plus_inf_ : r_minus_inf_; }

 private:
  std::function<double(double)> profile_;
  double gamma_;
  double u_star_star_;
  double r_minus_inf_;
  double r_plus_inf_;
};

struct EnvelopeAudit {
  double x_lo = -50.0;
  double x_hi = 50.0;
  int nx = 200;
  int nu = 200;
};

/// R(x) = gamma + max{d_u f(x,0), sup_u f(x,u)/u} over a 64-point log grid in (0, u**],
/// audited a posteriori on an nx-by-nu lattice.
LinearEnvelope build_envelope(const Habitat& hab, double gamma, double u_star_star, const EnvelopeAudit& audit = {});

struct HypothesisCheck {
  std::string name;
  bool passed = true;
  std::string detail;
  std::optional<std::pair<double, double>> witness;  ///< (x, u)
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  /// True when every check whose name starts with `prefix` passed.
  bool passed(std::string_view prefix = "") const;
};

struct HypothesisLattice {
  double x_lo = -20.0;
  double x_hi = 20.0;
  int nx = 101;
  int nu = 101;
  /// Upper end of the u-lattice; <= 0 uses the largest cap (or 10 without caps).
  double u_hi = 0.0;
  double limit_tolerance = 1e-6;
};

/// Sampled checks of the standing hypotheses (zero/monotone, limits, invariant caps).
HypothesisReport validate_hypotheses(const Habitat& hab, const HypothesisLattice& lattice = {});

}  // namespace ide
