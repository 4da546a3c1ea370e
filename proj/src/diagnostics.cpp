#include "ide/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ide/errors.hpp"

namespace ide {
namespace {

void finalize(GapSeries& s, const GapOptions& opts) {
  s.tolerance = opts.tolerance;
  const std::size_t len = s.gap.size();
  if (len == 0) {
    s.verdict = Verdict::inconclusive;
    return;
  }
  const auto tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(opts.tail_fraction * static_cast<double>(len))));
  bool any_empty = false;
  bool any_clipped = false;
  s.tail_max = 0.0;
  for (std::size_t i = len - std::min(tail, len); i < len; ++i) {
    s.tail_max = std::max(s.tail_max, s.gap[i]);
    any_empty = any_empty || s.empty[i];
    any_clipped = any_clipped || s.clipped[i];
  }
  if (any_empty) {
    s.verdict = Verdict::inconclusive;
  } else if (s.tail_max < opts.tolerance) {
    s.verdict = Verdict::pass;
  } else {
    s.verdict = any_clipped ? Verdict::inconclusive : Verdict::fail;
  }
}

void push(GapSeries& s, int step, const WindowSup& w, bool clipped) {
  s.steps.push_back(step);
  s.gap.push_back(w.value);
  s.empty.push_back(w.empty);
  s.clipped.push_back(clipped);
}

double crossing(double xa, double ua, double xb, double ub, double level) {
  if (ua == ub) return xa;
  return xa + (level - ua) / (ub - ua) * (xb - xa);
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

FrontTrace track_front(const Trajectory& traj, double level) {
  double overall = 0.0;
  for (const auto& s : traj.snapshots) overall = std::max(overall, s.u.max());
  if (!(level > 0.0) || !(level < overall)) {
    std::ostringstream os;
    os << "front level " << level << " outside (0, " << overall << ")";
    throw InvalidArgument(os.str());
  }
  FrontTrace tr;
  tr.level = level;
  for (const auto& s : traj.snapshots) {
    const Field& u = s.u;
    const auto& g = u.grid();
    const std::size_t n = u.size();
    tr.steps.push_back(s.step);
    tr.max_value.push_back(u.max());
    std::optional<std::size_t> first;
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < n; ++i) {
      if (u[i] >= level) {
        if (!first) first = i;
        last = i;
      }
    }
    if (!first) {
      tr.x_minus.emplace_back();
      tr.x_plus.emplace_back();
      continue;
    }
    const auto xi = [&](std::size_t i) { return g.x(static_cast<std::ptrdiff_t>(i)); };
    tr.x_minus.push_back(*first == 0 ? xi(0) : crossing(xi(*first - 1), u[*first - 1], xi(*first), u[*first], level));
    tr.x_plus.push_back(*last == n - 1 ? xi(n - 1) : crossing(xi(*last), u[*last], xi(*last + 1), u[*last + 1], level));
  }
  return tr;
}

SpeedFit estimate_speed(const FrontTrace& trace, int burn_in) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    if (trace.steps[i] >= burn_in && trace.x_plus[i]) {
      xs.push_back(trace.steps[i]);
      ys.push_back(*trace.x_plus[i]);
    }
  }
  if (xs.size() < 10) {
    throw InsufficientData("speed estimate needs at least 10 front crossings after burn-in, have " +
                           std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  SpeedFit fit;
  fit.points = static_cast<int>(xs.size());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    sse += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

UpwardConvergence upward_convergence(const Trajectory& traj, double u_star, double eps, double c_plus, double c_minus,
                                     const GapOptions& window_opts, const GapOptions& left_opts) {
  const double limit = 0.5 * std::min(c_plus, c_plus + c_minus);
  if (!(c_plus > 0.0) || !(eps > 0.0 && eps < limit)) {
    std::ostringstream os;
    os << "upward convergence needs c_+ > 0 and 0 < eps < " << limit << " (eps = " << eps << ")";
    throw InvalidArgument(os.str());
  }
  const double a = std::max(eps, -c_minus + eps);
  const double b = c_plus - eps;
  UpwardConvergence out;
  out.window.name = "upward_window";
  out.left.name = "upward_left";
  for (const auto& s : traj.snapshots) {
    const auto& g = s.u.grid();
    const double n = s.step;
    const Field target = Field::constant(g, u_star);
    const double lo = n * a;
    const double hi = n * b;
    const bool clipped = lo < g.x_min() || hi > g.x_max();
    push(out.window, s.step, sup_diff_on(s.u, target, lo, hi), clipped);
    push(out.left, s.step, sup_on(s.u, -std::numeric_limits<double>::infinity(), -n * eps), false);
  }
  finalize(out.window, window_opts);
  finalize(out.left, left_opts);
  out.verdict = combine(out.window.verdict, out.left.verdict);
  return out;
}

Annihilation annihilation(const Trajectory& traj, double eps, double c_plus, const GapOptions& opts) {
  if (!(eps > 0.0)) throw InvalidArgument("annihilation needs eps > 0");
  if (traj.snapshots.empty()) throw InvalidArgument("empty trajectory");
  const Field& u0 = traj.snapshots.front().u;
  const auto& g0 = u0.grid();
  if (u0[u0.size() - 1] > 0.0) {
    throw InvalidArgument("initial data does not vanish toward the right edge of the grid");
  }
  Annihilation out;
  out.support_edge = g0.x_min();
  for (std::size_t i = 0; i < u0.size(); ++i) {
    if (u0[i] > 0.0) out.support_edge = g0.x(static_cast<std::ptrdiff_t>(i));
  }
  const double rate = std::max(eps, c_plus + eps);
  constexpr double inf = std::numeric_limits<double>::infinity();
  out.ahead.name = "annihilation";
  if (c_plus < 0.0) {
    out.uniform.emplace();
    out.uniform->name = "annihilation_uniform";
  }
  for (const auto& s : traj.snapshots) {
    push(out.ahead, s.step, sup_on(s.u, out.support_edge + s.step * rate, inf), false);
    if (out.uniform) push(*out.uniform, s.step, sup_on(s.u, out.support_edge, inf), false);
  }
  finalize(out.ahead, opts);
  out.verdict = out.ahead.verdict;
  if (out.uniform) {
    finalize(*out.uniform, opts);
    out.verdict = combine(out.verdict, out.uniform->verdict);
  }
  return out;
}

Attractivity attractivity(const Trajectory& a, const Trajectory& b, const Field& W, double eps, double c_plus,
                          bool theory_supported, const GapOptions& opts) {
  if (!(eps > 0.0 && eps < c_plus)) throw InvalidArgument("attractivity needs 0 < eps < c_+");
  Attractivity out;
  out.theory_supported = theory_supported;
  auto series = [&](const Trajectory& t, const std::string& name) {
    GapSeries s;
    s.name = name;
    for (const auto& snap : t.snapshots) {
      push(s, snap.step, sup_diff_on(snap.u, W, -std::numeric_limits<double>::infinity(), snap.step * (c_plus - eps)), false);
    }
    finalize(s, opts);
    return s;
  };
  out.first = series(a, "attractivity_first");
  out.second = series(b, "attractivity_second");
  out.verdict = combine(out.first.verdict, out.second.verdict);
  return out;
}

}  // namespace ide
