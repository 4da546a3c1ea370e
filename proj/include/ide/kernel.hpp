#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ide {

/// Discrete convolution weights w_j at offsets y_j = j*h, j in [first, first + size).
struct Stencil {
  double h = 0.0;
  std::ptrdiff_t first = 0;
  std::vector<double> weights;
  /// Mass of the sampled density before renormalization.
  double raw_mass = 0.0;

  std::ptrdiff_t last() const { return first + static_cast<std::ptrdiff_t>(weights.size()) - 1; }
  double offset(std::size_t k) const { return static_cast<double>(first + static_cast<std::ptrdiff_t>(k)) * h; }
};

struct LogMgf {
  double value = 0.0;  ///< ln M(mu)
  double slope = 0.0;  ///< d/dmu ln M(mu), the mean of the exponentially tilted density
};

/// Dispersal kernel: a probability density on the line with exponential moments.
class Kernel {
 public:
  struct Gaussian {
    double mean;
    double variance;
  };
  struct Laplace {
    double rate;
    double shift;
  };
  struct Tabulated {
    std::vector<double> y;
    std::vector<double> density;
  };
  using Form = std::variant<Gaussian, Laplace, Tabulated>;

  /// truncation_radius <= 0 selects |mean| + 8 standard deviations.
  static Kernel gaussian(double mean, double variance, double truncation_radius = 0.0);
  /// Density (rate/2) exp(-rate |y - shift|). truncation_radius <= 0 keeps mass 1 - 1e-12.
  static Kernel laplace(double rate, double shift = 0.0, double truncation_radius = 0.0);
  /// Linear interpolation of (y, density); normalized to unit mass by the trapezoid rule.
  static Kernel tabulated(std::vector<double> y, std::vector<double> density);
  static Kernel from_csv(const std::string& path);

  const Form& form() const { return form_; }
  double truncation_radius() const { return radius_; }
  std::string describe() const;

  double density(double y) const;
  double log_density(double y) const;
  /// Mass outside [-r, r].
  double tail_mass(double r) const;

  /// Open interval of mu on which M(mu) is finite.
  std::pair<double, double> moment_domain() const;

  /// M(mu) = \int e^{mu y} k(y) dy, closed form where available.
  double mgf(double mu) const;
  /// ln M(mu) and its derivative; closed form for gaussian/laplace, quadrature for tabulated.
  LogMgf log_mgf(double mu) const;
  /// ln M(mu) by the composite rule on the lattice y_j = j*h (table nodes for tabulated kernels).
  LogMgf log_mgf_quadrature(double mu, double h) const;

  /// w_j = h k(j h) for |j h| <= truncation_radius, renormalized to sum to one.
  Stencil quadrature_weights(double h) const;

 private:
  Kernel(Form form, double radius) : form_(std::move(form)), radius_(radius) {}
  void require_moment(double mu) const;

  Form form_;
  double radius_;
};

}  // namespace ide
