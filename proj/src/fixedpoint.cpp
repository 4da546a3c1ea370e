#include "ide/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ide/errors.hpp"

namespace ide {
namespace {

std::optional<double> positive_equilibrium(const Habitat& hab) {
  if (!(hab.d_plus() > 1.0)) return std::nullopt;
  try {
    return limit_fixed_point(hab);
  } catch (const HypothesisViolation&) {
    return std::nullopt;
  }
}

// Nonincreasing orbit from `start`, optionally kept above `lower`.
FixedPointResult monotone_descent(const EvolutionOp& op, const Field& start, const Field* lower, double scale,
                                  const FixedPointOptions& opts) {
  if (!op.habitat().monotone_in_u()) {
    throw HypothesisViolation("habitat '" + op.habitat().name() + "' is not monotone in u; monotone iteration refused");
  }
  const double slack = opts.monotone_slack * std::max(1.0, scale);
  Field u = start;
  int it = 0;
  for (; it < opts.max_iters;) {
    Field v = op.apply(u);
    ++it;
    double r = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double inc = v[i] - u[i];
      if (inc > slack) throw MonotonicityViolation(it, i, inc);
      if (lower && v[i] < (*lower)[i] - 1e-10) {
        std::ostringstream os;
        os << "iterate dropped below the lower solution at index " << i << " (iteration " << it << ")";
        throw HypothesisViolation(os.str());
      }
      r = std::max(r, std::abs(inc));
    }
    u = std::move(v);
    if (r < opts.tol) break;
  }
  FixedPointResult out{u, sup_norm_diff(op.apply(u), u)};
  out.iterations = it;
  out.converged = out.residual < opts.tol;
  const Tails t = tail_means(u, opts.tail_fraction);
  out.tail_minus = t.minus;
  out.tail_plus = t.plus;
  out.classification = classify(u, t, positive_equilibrium(op.habitat()), opts);
  return out;
}

}  // namespace

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::zero: return "zero";
    case Classification::pulse: return "pulse";
    case Classification::front: return "front";
    case Classification::other: return "other";
  }
  return "?";
}

Tails tail_means(const Field& W, double fraction) {
  const std::size_t n = W.size();
  const std::size_t m = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))), 1, n);
  Tails t;
  for (std::size_t i = 0; i < m; ++i) {
    t.minus += W[i];
    t.plus += W[n - 1 - i];
  }
  t.minus /= static_cast<double>(m);
  t.plus /= static_cast<double>(m);
  return t;
}

Classification classify(const Field& W, const Tails& tails, std::optional<double> u_star, const FixedPointOptions& opts) {
  const double peak = W.max();
  if (peak < opts.zero_threshold) return Classification::zero;
  const double rel = opts.relative_threshold;
  if (u_star && std::abs(tails.plus - *u_star) <= rel * *u_star && tails.minus < rel * *u_star) {
    return Classification::front;
  }
  if (tails.minus < rel * peak && tails.plus < rel * peak) return Classification::pulse;
  return Classification::other;
}

FixedPointResult solve_from_cap(const EvolutionOp& op, double cap, const FixedPointOptions& opts) {
  if (!(cap > 0.0)) throw InvalidArgument("cap must be positive");
  return monotone_descent(op, Field::constant(op.grid(), cap), nullptr, cap, opts);
}

FixedPointResult solve_in_interval(const EvolutionOp& op, const Field& lower, double cap, const FixedPointOptions& opts) {
  if (!(lower.grid() == op.grid())) throw GridMismatch();
  if (!(cap >= lower.max())) throw InvalidArgument("cap must dominate the lower solution");
  const Field image = op.apply(lower);
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (image[i] < lower[i] - 1e-10) {
      std::ostringstream os;
      os << "lower field is not a subsolution at x = " << lower.grid().x(static_cast<std::ptrdiff_t>(i))
         << " (Q[lower] - lower = " << image[i] - lower[i] << ")";
      throw HypothesisViolation(os.str());
    }
  }
  return monotone_descent(op, Field::constant(op.grid(), cap), &lower, cap, opts);
}

TailCheck exponential_tail_check(const Field& W, double mu) {
  if (!(mu > 0.0)) throw InvalidArgument("tail check needs mu > 0");
  const auto& g = W.grid();
  const std::size_t half = W.size() / 2;
  const std::size_t tail = std::max<std::size_t>(2, half / 2);
  auto ratio = [&](std::size_t i) {
    const double w = W[i] < 1e-290 ? 0.0 : W[i];
    return w * std::exp(-mu * g.x(static_cast<std::ptrdiff_t>(i)));
  };
  TailCheck out;
  for (std::size_t i = 0; i <= half; ++i) out.A = std::max(out.A, ratio(i));
  for (std::size_t i = tail; i > 0; --i) {
    const double inner = ratio(i);
    const double outer = ratio(i - 1);
    if (outer > inner * (1.0 + 1e-9)) {
      out.bounded = false;
      break;
    }
  }
  return out;
}

NonexistenceCertificate nonexistence_certificate(const EvolutionOp& op, const LinearEnvelope& env, const Kernel& k,
                                                 double eps, const CertificateOptions& opts) {
  NonexistenceCertificate cert;
  const Habitat& hab = op.habitat();
  if (!hab.linear_controlled()) {
    cert.refusal = "habitat '" + hab.name() + "' is not linearly controlled (f(x,u) <= d_plus u fails)";
    return cert;
  }
  if (!(hab.d_minus() < 1.0)) {
    cert.refusal = "slope at zero does not drop below one toward -inf";
    return cert;
  }
  if (std::abs(env.limit(Side::plus) - (env.gamma() + hab.d_plus())) > 1e-12 * std::max(1.0, hab.d_plus())) {
    cert.refusal = "envelope limit at +inf is not gamma + d_plus";
    return cert;
  }
  const SpeedResult s = spreading_speed(env.limit(Side::plus), k, Side::minus, opts.speed);
  cert.c_star_minus_L = s.c;
  if (!(s.c < 0.0)) {
    std::ostringstream os;
    os << "leftward speed of the upper linear operator is " << s.c << " >= 0";
    cert.refusal = os.str();
    return cert;
  }
  try {
    cert.decay = decay_rate(env.limit(Side::plus), k, eps, opts.speed);
  } catch (const Error& e) {
    cert.refusal = std::string("decay rate: ") + e.what();
    return cert;
  }
  if (hab.caps().empty()) {
    cert.refusal = "habitat has no invariant cap to iterate from";
    return cert;
  }
  cert.corroboration = solve_from_cap(op, hab.caps().back(), opts.solver);
  cert.final_sup = cert.corroboration->W.max();
  cert.tail = exponential_tail_check(cert.corroboration->W, cert.decay->mu_eps);
  if (cert.corroboration->classification != Classification::zero || !(cert.final_sup < opts.collapse_threshold)) {
    std::ostringstream os;
    os << "cap iteration did not collapse to zero (sup = " << cert.final_sup << " after "
       << cert.corroboration->iterations << " iterations)";
    cert.refusal = os.str();
    return cert;
  }
  cert.granted = true;
  return cert;
}

}  // namespace ide
