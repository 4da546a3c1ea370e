#include "ide/speeds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ide/errors.hpp"

namespace ide {
namespace {

struct Objective {
  double coef;
  const Kernel& k;
  Side side;
  const SpeedOptions& opts;
  int evaluations = 0;

  // ln M(sign*mu) and d/dmu of it.
  LogMgf log_m(double mu) {
    ++evaluations;
    const double s = side == Side::plus ? 1.0 : -1.0;
    const LogMgf l = opts.path == MgfPath::analytic ? k.log_mgf(s * mu) : k.log_mgf_quadrature(s * mu, opts.quadrature_step);
    return {l.value, s * l.slope};
  }
  double value(double mu) { return (std::log(coef) + log_m(mu).value) / mu; }
  // Sign of the derivative of value(mu).
  double numerator(double mu) {
    const LogMgf l = log_m(mu);
    return mu * l.slope - (std::log(coef) + l.value);
  }
};

}  // namespace

std::string_view to_string(Attainment a) {
  switch (a) {
    case Attainment::interior: return "interior";
    case Attainment::lower_boundary: return "lower_boundary";
    case Attainment::upper_boundary: return "upper_boundary";
  }
  return "?";
}

double speed_objective(double coef, const Kernel& k, Side side, double mu, const SpeedOptions& opts) {
  if (!(coef > 0.0)) throw InvalidArgument("speed coefficient must be positive");
  Objective obj{coef, k, side, opts};
  return obj.value(mu);
}

SpeedResult spreading_speed(double coef, const Kernel& k, Side side, const SpeedOptions& opts) {
  if (!(coef > 0.0) || !std::isfinite(coef)) throw InvalidArgument("speed coefficient must be positive");
  const auto [dlo, dhi] = k.moment_domain();
  // Feasible mu are those with M(+-mu) finite.
  const double bound = side == Side::plus ? dhi : -dlo;
  double a = opts.mu_lo;
  double b = std::min(opts.mu_hi, std::isfinite(bound) ? bound * (1.0 - 1e-9) : opts.mu_hi);
  if (!(a > 0.0) || !(b > a)) throw InvalidArgument("empty feasible mu interval");

  Objective obj{coef, k, side, opts};
  const double lo = a;
  const double hi = b;

  // Golden section until the bracket is small relative to its position.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = obj.value(c);
  double fd = obj.value(d);
  while (b - a > 1e-6 * std::max(1.0, a)) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = obj.value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = obj.value(d);
    }
  }

  SpeedResult out;
  // The numerator is nondecreasing (convexity of ln M), so its sign brackets the argmin.
  if (obj.numerator(lo) >= 0.0) {
    out.mu = lo;
    out.attainment = Attainment::lower_boundary;
  } else if (obj.numerator(hi) <= 0.0) {
    out.mu = hi;
    out.attainment = Attainment::upper_boundary;
  } else {
    // Widen the golden bracket until it straddles the sign change, then bisect.
    double left = a;
    double right = b;
    for (double w = b - a; obj.numerator(left) > 0.0 && left > lo; w *= 2.0) left = std::max(lo, left - w);
    for (double w = b - a; obj.numerator(right) < 0.0 && right < hi; w *= 2.0) right = std::min(hi, right + w);
    while (right - left > opts.mu_tol * std::max(1.0, left)) {
      const double mid = 0.5 * (left + right);
      if (mid <= left || mid >= right) break;
      (obj.numerator(mid) < 0.0 ? left : right) = mid;
    }
    out.mu = 0.5 * (left + right);
  }
  out.c = obj.value(out.mu);
  out.evaluations = obj.evaluations;
  return out;
}

SpeedReport speed_report(double coef, const Kernel& k, const SpeedOptions& opts) {
  const auto p = spreading_speed(coef, k, Side::plus, opts);
  const auto m = spreading_speed(coef, k, Side::minus, opts);
  return {p.c, m.c, p.mu, m.mu, p.attainment, m.attainment, p.evaluations + m.evaluations};
}

SpeedResult envelope_speed(const LinearEnvelope& env, const Kernel& k, Side side, const SpeedOptions& opts) {
  return spreading_speed(env.limit(Side::plus), k, side, opts);
}

DecayReport decay_rate(double coef, const Kernel& k, double epsilon, const SpeedOptions& opts) {
  const SpeedResult s = spreading_speed(coef, k, Side::minus, opts);
  if (!(s.c < 0.0)) {
    std::ostringstream os;
    os << "decay rate needs a negative leftward speed, got " << s.c;
    throw HypothesisViolation(os.str());
  }
  if (!(epsilon > 0.0 && epsilon < -s.c)) {
    std::ostringstream os;
    os << "epsilon must lie in (0, " << -s.c << "), got " << epsilon;
    throw InvalidArgument(os.str());
  }
  const double target = s.c + epsilon;
  auto lambda = [&](double mu) {
    const double lm = opts.path == MgfPath::analytic ? k.log_mgf(-mu).value
                                                     : k.log_mgf_quadrature(-mu, opts.quadrature_step).value;
    return coef * std::exp(lm);
  };
  // The argmin satisfies the strict inequality whenever epsilon > 0; scan outward from it
  // only if rounding put it on the boundary of the feasible window.
  double mu = s.mu;
  auto ok = [&](double m) { return lambda(m) < std::exp(target * m) && std::exp(target * m) < 1.0; };
  if (!ok(mu)) {
    bool found = false;
    for (int i = 1; i <= 200 && !found; ++i) {
      for (double sgn : {1.0, -1.0}) {
        const double m = s.mu * (1.0 + sgn * 0.005 * i);
        if (m > 0.0 && ok(m)) {
          mu = m;
          found = true;
          break;
        }
      }
    }
    if (!found) throw ConvergenceError("no mu satisfies the decay inequality");
  }
  return {s.c, epsilon, mu, lambda(mu), std::exp(target * mu)};
}

}  // namespace ide
