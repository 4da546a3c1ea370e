#include "ide/habitat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ide/errors.hpp"

namespace ide {
namespace {

constexpr double kE = std::numbers::e;

std::vector<double> geometric_caps(double base, int count = 8) {
  std::vector<double> caps;
  for (int k = 0; k < count; ++k) caps.push_back(base * std::ldexp(1.0, k));
  return caps;
}

std::string fmt(double x, double u) {
  std::ostringstream os;
  os.precision(10);
  os << "(x=" << x << ", u=" << u << ")";
  return os.str();
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::plus ? "plus" : "minus"; }

Habitat::Habitat(HabitatParts parts) : p_(std::move(parts)) {
  if (!p_.f || !p_.dfdu0 || !p_.f_minus || !p_.f_plus) {
    throw InvalidArgument("habitat '" + p_.name + "' is missing a component function");
  }
  if (!std::isfinite(p_.d_minus) || !std::isfinite(p_.d_plus) || p_.d_minus < 0.0 || p_.d_plus < 0.0) {
    throw InvalidArgument("habitat '" + p_.name + "' needs finite nonnegative limit slopes");
  }
  for (std::size_t k = 0; k < p_.caps.size(); ++k) {
    if (!(p_.caps[k] > 0.0) || (k > 0 && !(p_.caps[k] > p_.caps[k - 1]))) {
      throw InvalidArgument("habitat '" + p_.name + "' caps must be positive and strictly increasing");
    }
  }
}

double plateau_growth(double u) { return u <= 1.0 ? u * std::exp(-u) : 1.0 / kE; }

std::optional<Nonlinearity> parse_nonlinearity(std::string_view name) {
  if (name == "linear") return Nonlinearity::linear;
  if (name == "plateau") return Nonlinearity::plateau;
  if (name == "ricker") return Nonlinearity::ricker;
  if (name == "beverton_holt") return Nonlinearity::beverton_holt;
  return std::nullopt;
}

std::string_view to_string(Nonlinearity n) {
  switch (n) {
    case Nonlinearity::linear: return "linear";
    case Nonlinearity::plateau: return "plateau";
    case Nonlinearity::ricker: return "ricker";
    case Nonlinearity::beverton_holt: return "beverton_holt";
  }
  return "?";
}

Coefficient constant_coefficient(double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("coefficient must be finite and nonnegative");
  return {[a](double) { return a; }, a, a, a};
}

Coefficient tabulated_coefficient(const Field& profile) {
  if (profile.min() < 0.0) throw InvalidArgument("coefficient profile must be nonnegative");
  return {[profile](double x) { return profile.at(x); }, profile[0], profile[profile.size() - 1], profile.max()};
}

Habitat product_habitat(std::string name, Coefficient coef, Nonlinearity shape, double k, std::vector<double> caps) {
  if (!(k > 0.0)) throw InvalidArgument("beverton_holt shape parameter must be positive");
  std::function<double(double)> n;
  switch (shape) {
    case Nonlinearity::linear: n = [](double u) { return u; }; break;
    case Nonlinearity::plateau: n = plateau_growth; break;
    case Nonlinearity::ricker: n = [](double u) { return u * std::exp(-u); }; break;
    case Nonlinearity::beverton_holt: n = [k](double u) { return u / (1.0 + u / k); }; break;
  }
  if (caps.empty()) {
    switch (shape) {
      case Nonlinearity::linear:
        if (coef.sup <= 1.0) caps = geometric_caps(1.0);
        break;
      case Nonlinearity::plateau:
      case Nonlinearity::ricker: caps = geometric_caps(coef.sup > 0.0 ? std::max(coef.sup / kE, 1e-3) : 1.0); break;
      case Nonlinearity::beverton_holt: caps = geometric_caps(k * std::max(1.0, coef.sup - 1.0)); break;
    }
  }
  HabitatParts p;
  p.name = std::move(name);
  auto a = coef.a;
  p.f = [a, n](double x, double u) { return a(x) * n(u); };
  p.dfdu0 = a;
  const double am = coef.minus;
  const double ap = coef.plus;
  p.f_minus = [am, n](double u) { return am * n(u); };
  p.f_plus = [ap, n](double u) { return ap * n(u); };
  p.d_minus = am;
  p.d_plus = ap;
  p.caps = std::move(caps);
  p.monotone_in_u = shape != Nonlinearity::ricker;
  p.subhomogeneous = true;
  p.linear_controlled = coef.sup <= ap;
  p.envelope_condition = EnvelopeCondition::global_linearization_bound;
  return Habitat(std::move(p));
}

Habitat beverton_holt(double r_minus, double r_plus, double K, double steepness, double center) {
  if (!(0.0 < r_minus && r_minus < 1.0 && 1.0 < r_plus) || !std::isfinite(r_plus)) {
    throw InvalidArgument("beverton_holt requires 0 < R_minus < 1 < R_plus");
  }
  if (!(K > 0.0) || !(steepness > 0.0)) throw InvalidArgument("beverton_holt requires K > 0 and steepness > 0");
  auto R = [=](double x) {
    const double z = std::clamp(-steepness * (x - center), -700.0, 700.0);
    return r_minus + (r_plus - r_minus) / (1.0 + std::exp(z));
  };
  auto bh = [K](double r, double u) { return r * u / (1.0 + (std::max(r - 1.0, 0.0) / K) * u); };
  HabitatParts p;
  p.name = "beverton_holt";
  p.f = [R, bh](double x, double u) { return bh(R(x), u); };
  p.dfdu0 = R;
  p.f_minus = [bh, r_minus](double u) { return bh(r_minus, u); };
  p.f_plus = [bh, r_plus](double u) { return bh(r_plus, u); };
  p.d_minus = r_minus;
  p.d_plus = r_plus;
  p.caps = geometric_caps(K);
  p.monotone_in_u = true;
  p.subhomogeneous = true;
  p.linear_controlled = true;
  p.envelope_condition = EnvelopeCondition::global_linearization_bound;
  return Habitat(std::move(p));
}

Habitat counterexample_g(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  HabitatParts p;
  p.name = "counterexample_g";
  p.f = [beta](double x, double u) { return beta * std::exp(-x * x) * plateau_growth(u); };
  p.dfdu0 = [beta](double x) { return beta * std::exp(-x * x); };
  p.f_minus = [](double) { return 0.0; };
  p.f_plus = [](double) { return 0.0; };
  p.d_minus = 0.0;
  p.d_plus = 0.0;
  p.caps = geometric_caps(beta / kE);
  p.linear_controlled = false;
  p.envelope_condition = EnvelopeCondition::global_linearization_bound;
  return Habitat(std::move(p));
}

Habitat counterexample_h(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  auto coef = [beta](double x) { return std::max(beta * std::exp(-x * x), kE - std::exp(-x)); };
  HabitatParts p;
  p.name = "counterexample_h";
  p.f = [coef](double x, double u) { return coef(x) * plateau_growth(u); };
  p.dfdu0 = coef;
  p.f_minus = [](double) { return 0.0; };
  p.f_plus = [](double u) { return kE * plateau_growth(u); };
  p.d_minus = 0.0;
  p.d_plus = kE;
  p.caps = geometric_caps(std::max(1.0, std::max(beta, kE) / kE));
  // sup_x coef(x) = max{beta, e}, so h <= e u everywhere exactly when beta <= e.
  p.linear_controlled = beta <= kE;
  p.envelope_condition = EnvelopeCondition::global_linearization_bound;
  return Habitat(std::move(p));
}

std::pair<Habitat, Habitat> counterexample(double beta) { return {counterexample_g(beta), counterexample_h(beta)}; }

double limit_fixed_point(const Habitat& hab) {
  if (!(hab.d_plus() > 1.0)) {
    throw HypothesisViolation("limit_fixed_point needs d_u f_+(0) > 1 (got " + std::to_string(hab.d_plus()) + ")");
  }
  auto g = [&](double u) { return hab.limit(Side::plus, u) - u; };
  double hi = hab.caps().empty() ? 1.0 : hab.caps().back();
  for (int k = 0; k < 200 && g(hi) > 0.0; ++k) hi *= 2.0;
  if (g(hi) > 0.0) throw HypothesisViolation("f_+(u) - u has no sign change: no positive equilibrium");
  double lo = hi * 1e-9;
  for (int k = 0; k < 50 && !(g(lo) > 0.0); ++k) lo *= 1e-3;
  if (!(g(lo) > 0.0)) throw HypothesisViolation("f_+(u) - u is not positive near zero");
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

LinearEnvelope build_envelope(const Habitat& hab, double gamma, double u_star_star, const EnvelopeAudit& audit) {
  if (!(gamma > 0.0) || !(u_star_star > 0.0)) throw InvalidArgument("envelope needs gamma > 0 and u** > 0");
  if (hab.envelope_condition() == EnvelopeCondition::none) {
    throw HypothesisViolation("habitat '" + hab.name() + "' declares no envelope condition");
  }
  std::vector<double> us(64);
  for (int k = 0; k < 64; ++k) us[k] = u_star_star * std::pow(10.0, -10.0 * (63 - k) / 63.0);
  auto ratio_sup = [us](const std::function<double(double)>& fx, double slope0) {
    double r = slope0;
    for (double u : us) r = std::max(r, fx(u) / u);
    return r;
  };
  const Habitat h = hab;
  auto profile = [h, gamma, ratio_sup](double x) {
    return gamma + ratio_sup([&](double u) { return h(x, u); }, h.slope_at_zero(x));
  };
  const double r_minus = gamma + ratio_sup([&](double u) { return hab.limit(Side::minus, u); }, hab.d_minus());
  const double r_plus = gamma + hab.d_plus();
  LinearEnvelope env(profile, gamma, u_star_star, r_minus, r_plus);

  for (int i = 0; i < audit.nx; ++i) {
    const double x = audit.x_lo + (audit.x_hi - audit.x_lo) * i / std::max(1, audit.nx - 1);
    const double R = env(x);
    if (hab.linear_controlled() && R > gamma + hab.d_plus() + 1e-12) {
      throw EnvelopeViolation(x, 0.0, "envelope exceeds gamma + d_plus at " + fmt(x, 0.0));
    }
    for (int k = 1; k <= audit.nu; ++k) {
      const double u = u_star_star * k / audit.nu;
      const double f = hab(x, u);
      if (f > R * u * (1.0 + 1e-12)) {
        throw EnvelopeViolation(x, u, "f(x,u) > R(x) u at " + fmt(x, u));
      }
    }
  }
  return env;
}

bool HypothesisReport::passed(std::string_view prefix) const {
  return std::all_of(checks.begin(), checks.end(), [&](const HypothesisCheck& c) {
    return !std::string_view(c.name).starts_with(prefix) || c.passed;
  });
}

HypothesisReport validate_hypotheses(const Habitat& hab, const HypothesisLattice& lat) {
  HypothesisReport rep;
  const double u_hi = lat.u_hi > 0.0 ? lat.u_hi : (hab.caps().empty() ? 10.0 : hab.caps().back());
  auto xs = [&](int i) { return lat.x_lo + (lat.x_hi - lat.x_lo) * i / std::max(1, lat.nx - 1); };
  auto us = [&](int k) { return u_hi * k / std::max(1, lat.nu - 1); };
  auto fail = [](HypothesisCheck& c, double x, double u, const std::string& what) {
    if (!c.passed) return;
    c.passed = false;
    c.witness = std::make_pair(x, u);
    c.detail = what + " at " + fmt(x, u);
  };

  HypothesisCheck zero{"growth.zero", true, "", std::nullopt};
  HypothesisCheck nonneg{"growth.positive", true, "", std::nullopt};
  HypothesisCheck mono{"growth.monotone", true, "", std::nullopt};
  for (int i = 0; i < lat.nx; ++i) {
    const double x = xs(i);
    if (hab(x, 0.0) != 0.0) fail(zero, x, 0.0, "f(x,0) != 0");
    double prev = hab(x, 0.0);
    for (int k = 1; k < lat.nu; ++k) {
      const double u = us(k);
      const double f = hab(x, u);
      if (!(f > 0.0)) fail(nonneg, x, u, "f(x,u) not positive for u > 0");
      if (f < prev - 1e-14 * std::max(1.0, std::abs(prev))) fail(mono, x, u, "f(x,.) decreases");
      prev = f;
    }
  }
  rep.checks.push_back(zero);
  rep.checks.push_back(nonneg);
  rep.checks.push_back(mono);

  HypothesisCheck slopes{"limits.slopes", true, "", std::nullopt};
  if (!(hab.d_plus() > 1.0 && 1.0 > hab.d_minus())) {
    slopes.passed = false;
    std::ostringstream os;
    os << "need d_plus > 1 > d_minus, got d_plus=" << hab.d_plus() << ", d_minus=" << hab.d_minus();
    slopes.detail = os.str();
  }
  rep.checks.push_back(slopes);

  HypothesisCheck bounds{"limits.bounds", true, "", std::nullopt};
  HypothesisCheck consistency{"limits.consistency", true, "", std::nullopt};
  for (int k = 0; k < lat.nu; ++k) {
    const double u = us(k);
    for (Side s : {Side::minus, Side::plus}) {
      const double f = hab.limit(s, u);
      if (f < 0.0 || f > hab.limit_slope(s) * u * (1.0 + 1e-12) + 1e-300) {
        fail(bounds, s == Side::plus ? INFINITY : -INFINITY, u, "f_" + std::string(to_string(s)) + " outside [0, d u]");
      }
    }
    if (std::abs(hab(lat.x_hi, u) - hab.limit(Side::plus, u)) > lat.limit_tolerance) {
      fail(consistency, lat.x_hi, u, "f(x_hi,u) differs from f_+(u)");
    }
    if (std::abs(hab(lat.x_lo, u) - hab.limit(Side::minus, u)) > lat.limit_tolerance) {
      fail(consistency, lat.x_lo, u, "f(x_lo,u) differs from f_-(u)");
    }
  }
  rep.checks.push_back(bounds);
  rep.checks.push_back(consistency);

  HypothesisCheck unique{"limits.unique_equilibrium", true, "", std::nullopt};
  int crossings = 0;
  int last_sign = 0;
  for (int k = 1; k < 4 * lat.nu; ++k) {
    const double u = u_hi * k / (4.0 * lat.nu - 1.0);
    const double g = hab.limit(Side::plus, u) - u;
    const int sign = std::abs(g) <= 1e-14 * std::max(1.0, u) ? 0 : (g > 0.0 ? 1 : -1);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) ++crossings;
      last_sign = sign;
    }
  }
  if (crossings != 1) {
    unique.passed = false;
    unique.detail = "f_+(u) - u changes sign " + std::to_string(crossings) + " times on (0, " + std::to_string(u_hi) + "]";
  }
  rep.checks.push_back(unique);

  HypothesisCheck caps{"caps.invariant", true, "", std::nullopt};
  if (hab.caps().empty()) {
    caps.passed = false;
    caps.detail = "no invariant caps supplied";
  }
  for (double c : hab.caps()) {
    for (int i = 0; i < lat.nx && caps.passed; ++i) {
      const double x = xs(i);
      for (int k = 0; k <= 50; ++k) {
        const double u = c * k / 50.0;
        const double f = hab(x, u);
        if (f < 0.0 || f > c * (1.0 + 1e-12)) {
          fail(caps, x, u, "f(x,u) leaves [0, " + std::to_string(c) + "]");
          break;
        }
      }
    }
  }
  rep.checks.push_back(caps);
  return rep;
}

}  // namespace ide
