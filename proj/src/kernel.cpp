#include "ide/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ide/errors.hpp"
#include "ide/grid.hpp"

namespace ide {
namespace {

constexpr double kTailThreshold = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

// Log-sum-exp accumulation of sum_j exp(t_j) and sum_j y_j exp(t_j).
struct LogSum {
  std::vector<double> t;
  std::vector<double> y;

  LogMgf finish() const {
    const double tmax = *std::max_element(t.begin(), t.end());
    if (!std::isfinite(tmax)) throw MomentDivergence("moment integrand is not finite");
    double s = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = std::exp(t[i] - tmax);
      s += e;
      sy += e * y[i];
    }
    return {tmax + std::log(s), sy / s};
  }
};

}  // namespace

Kernel Kernel::gaussian(double mean, double variance, double truncation_radius) {
  if (!(variance > 0.0) || !std::isfinite(mean)) {
    throw InvalidArgument("gaussian kernel requires finite mean and variance > 0");
  }
  const double r = truncation_radius > 0.0 ? truncation_radius
                                           : std::abs(mean) + 8.0 * std::sqrt(variance);
  return Kernel(Gaussian{mean, variance}, r);
}

Kernel Kernel::laplace(double rate, double shift, double truncation_radius) {
  if (!(rate > 0.0) || !std::isfinite(shift)) {
    throw InvalidArgument("laplace kernel requires rate > 0 and finite shift");
  }
  // Two-sided tail 0.5 e^{-rate d} on each side sums to e^{-rate d}.
  const double r = truncation_radius > 0.0 ? truncation_radius
                                           : std::abs(shift) + std::log(1.0 / kTailThreshold) / rate;
  return Kernel(Laplace{rate, shift}, r);
}

Kernel Kernel::tabulated(std::vector<double> y, std::vector<double> density) {
  if (y.size() < 2 || y.size() != density.size()) {
    throw InvalidArgument("tabulated kernel needs at least two (y, density) rows");
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || !std::isfinite(density[i])) throw NonFiniteValue(i, "kernel table");
    if (density[i] < 0.0) throw InvalidArgument("kernel density must be nonnegative");
    if (i > 0 && !(y[i] > y[i - 1])) throw InvalidArgument("kernel table abscissae must increase");
  }
  const double mass = trapezoid(y, density);
  if (!(mass > 0.0)) throw InvalidArgument("kernel table has zero mass");
  for (double& d : density) d /= mass;
  const double r = std::max(std::abs(y.front()), std::abs(y.back()));
  return Kernel(Tabulated{std::move(y), std::move(density)}, r);
}

Kernel Kernel::from_csv(const std::string& path) {
  auto cols = read_xy_csv(path);
  return tabulated(std::move(cols.x), std::move(cols.y));
}

std::string Kernel::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const Gaussian& g) { os << "gaussian(mean=" << g.mean << ", variance=" << g.variance << ")"; },
                 [&](const Laplace& l) { os << "laplace(rate=" << l.rate << ", shift=" << l.shift << ")"; },
                 [&](const Tabulated& t) { os << "tabulated(" << t.y.size() << " rows)"; },
             },
             form_);
  return os.str();
}

double Kernel::density(double y) const {
  return std::visit(Overloaded{
                        [&](const Gaussian& g) {
                          const double d = y - g.mean;
                          return std::exp(-d * d / (2.0 * g.variance)) /
                                 std::sqrt(2.0 * std::numbers::pi * g.variance);
                        },
                        [&](const Laplace& l) { return 0.5 * l.rate * std::exp(-l.rate * std::abs(y - l.shift)); },
                        [&](const Tabulated& t) {
                          if (y < t.y.front() || y > t.y.back()) return 0.0;
                          auto it = std::upper_bound(t.y.begin(), t.y.end(), y);
                          if (it == t.y.end()) return t.density.back();
                          const auto i = static_cast<std::size_t>(it - t.y.begin());
                          const double s = (y - t.y[i - 1]) / (t.y[i] - t.y[i - 1]);
                          return (1.0 - s) * t.density[i - 1] + s * t.density[i];
                        },
                    },
                    form_);
}

double Kernel::log_density(double y) const {
  return std::visit(Overloaded{
                        [&](const Gaussian& g) {
                          const double d = y - g.mean;
                          return -d * d / (2.0 * g.variance) - 0.5 * std::log(2.0 * std::numbers::pi * g.variance);
                        },
                        [&](const Laplace& l) { return std::log(0.5 * l.rate) - l.rate * std::abs(y - l.shift); },
                        [&](const Tabulated&) { return std::log(density(y)); },
                    },
                    form_);
}

double Kernel::tail_mass(double r) const {
  return std::visit(Overloaded{
                        [&](const Gaussian& g) {
                          const double s = std::sqrt(2.0 * g.variance);
                          return 0.5 * std::erfc((r - g.mean) / s) + 0.5 * std::erfc((r + g.mean) / s);
                        },
                        [&](const Laplace& l) {
                          auto upper = [&](double a) {  // P(Y > a)
                            return a >= l.shift ? 0.5 * std::exp(-l.rate * (a - l.shift))
                                                : 1.0 - 0.5 * std::exp(-l.rate * (l.shift - a));
                          };
                          return upper(r) + (1.0 - upper(-r));
                        },
                        [&](const Tabulated& t) {
                          std::vector<double> xs;
                          std::vector<double> ds;
                          double inside = 0.0;
                          for (std::size_t i = 0; i < t.y.size(); ++i) {
                            if (std::abs(t.y[i]) <= r) {
                              xs.push_back(t.y[i]);
                              ds.push_back(t.density[i]);
                            }
                          }
                          if (xs.size() >= 2) inside = trapezoid(xs, ds);
                          return std::max(0.0, 1.0 - inside);
                        },
                    },
                    form_);
}

std::pair<double, double> Kernel::moment_domain() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (const auto* l = std::get_if<Laplace>(&form_)) return {-l->rate, l->rate};
  return {-inf, inf};
}

void Kernel::require_moment(double mu) const {
  const auto [lo, hi] = moment_domain();
  if (!(mu > lo && mu < hi)) {
    std::ostringstream os;
    os << "moment generating function diverges at mu = " << mu << " for " << describe();
    throw MomentDivergence(os.str());
  }
}

double Kernel::mgf(double mu) const { return std::exp(log_mgf(mu).value); }

LogMgf Kernel::log_mgf(double mu) const {
  require_moment(mu);
  return std::visit(Overloaded{
                        [&](const Gaussian& g) {
                          return LogMgf{g.mean * mu + 0.5 * g.variance * mu * mu, g.mean + g.variance * mu};
                        },
                        [&](const Laplace& l) {
                          const double r2 = l.rate * l.rate;
                          return LogMgf{l.shift * mu + std::log(r2 / (r2 - mu * mu)),
                                        l.shift + 2.0 * mu / (r2 - mu * mu)};
                        },
                        [&](const Tabulated&) { return log_mgf_quadrature(mu, 0.0); },
                    },
                    form_);
}

LogMgf Kernel::log_mgf_quadrature(double mu, double h) const {
  require_moment(mu);
  LogSum acc;
  if (const auto* t = std::get_if<Tabulated>(&form_)) {
    // Trapezoid for the piecewise-linear density on sub-cells of width <= h
    // (h <= 0 picks 1/20000 of the table span).
    const double span = t->y.back() - t->y.front();
    const double step = h > 0.0 ? h : span / 20000.0;
    for (std::size_t i = 0; i + 1 < t->y.size(); ++i) {
      const double a = t->y[i];
      const double width = t->y[i + 1] - a;
      const auto m = static_cast<std::size_t>(std::ceil(width / step - 1e-9));
      const double dy = width / static_cast<double>(m);
      for (std::size_t j = 0; j <= m; ++j) {
        const double s = static_cast<double>(j) / static_cast<double>(m);
        const double d = (1.0 - s) * t->density[i] + s * t->density[i + 1];
        const double w = (j == 0 || j == m) ? 0.5 * dy : dy;
        if (!(d * w > 0.0)) continue;
        const double y = a + s * width;
        acc.t.push_back(std::log(d * w) + mu * y);
        acc.y.push_back(y);
      }
    }
    return acc.finish();
  }
  if (!(h > 0.0)) throw InvalidArgument("quadrature step must be positive");
  double lo = 0.0;
  double hi = 0.0;
  if (const auto* g = std::get_if<Gaussian>(&form_)) {
    const double center = g->mean + mu * g->variance;
    const double sd = std::sqrt(g->variance);
    lo = center - 14.0 * sd;
    hi = center + 14.0 * sd;
  } else {
    const auto& l = std::get<Laplace>(form_);
    lo = l.shift - 40.0 / (l.rate + mu);
    hi = l.shift + 40.0 / (l.rate - mu);
  }
  const auto j0 = static_cast<std::ptrdiff_t>(std::floor(lo / h));
  const auto j1 = static_cast<std::ptrdiff_t>(std::ceil(hi / h));
  if (j1 - j0 > 20'000'000) throw MomentDivergence("quadrature range too wide near the moment boundary");
  const double logh = std::log(h);
  acc.t.reserve(static_cast<std::size_t>(j1 - j0 + 1));
  acc.y.reserve(static_cast<std::size_t>(j1 - j0 + 1));
  for (std::ptrdiff_t j = j0; j <= j1; ++j) {
    const double y = static_cast<double>(j) * h;
    acc.t.push_back(logh + log_density(y) + mu * y);
    acc.y.push_back(y);
  }
  return acc.finish();
}

Stencil Kernel::quadrature_weights(double h) const {
  if (!(h > 0.0)) throw InvalidArgument("quadrature step must be positive");
  const double tail = tail_mass(radius_);
  if (tail > kTailThreshold) {
    std::ostringstream os;
    os << "truncation radius " << radius_ << " leaves tail mass " << tail << " for " << describe();
    throw TruncationError(os.str());
  }
  Stencil s;
  s.h = h;
  s.first = static_cast<std::ptrdiff_t>(std::ceil(-radius_ / h - 1e-9));
  const auto last = static_cast<std::ptrdiff_t>(std::floor(radius_ / h + 1e-9));
  double raw = 0.0;
  for (std::ptrdiff_t j = s.first; j <= last; ++j) {
    const double w = h * density(static_cast<double>(j) * h);
    s.weights.push_back(w);
    raw += w;
  }
  if (!(raw > 0.0) || std::abs(raw - 1.0) > 1e-3) {
    std::ostringstream os;
    os << "spacing " << h << " does not resolve " << describe() << " (sampled mass " << raw << ")";
    throw TruncationError(os.str());
  }
  for (double& w : s.weights) w /= raw;
  // Trim exact zeros at the ends (tabulated kernels with narrow support).
  while (s.weights.size() > 1 && s.weights.back() == 0.0) s.weights.pop_back();
  while (s.weights.size() > 1 && s.weights.front() == 0.0) {
    s.weights.erase(s.weights.begin());
    ++s.first;
  }
  s.raw_mass = raw;
  return s;
}

}  // namespace ide
