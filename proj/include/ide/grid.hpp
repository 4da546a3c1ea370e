#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ide {

/// Uniform truncation [x_min, x_max] of the real line with n >= 2 samples.
class SpatialGrid {
 public:
  SpatialGrid(double x_min, double x_max, std::size_t n);

  /// Grid whose spacing is as close as possible to `h` (n rounded to the nearest integer).
  static SpatialGrid with_spacing(double x_min, double x_max, double h);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  double x(std::ptrdiff_t i) const { return x_min_ + static_cast<double>(i) * h_; }

  friend bool operator==(const SpatialGrid& a, const SpatialGrid& b) {
    return a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_ && a.n_ == b.n_;
  }

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double h_;
};

/// Sampled real function on a SpatialGrid. Values are finite; immutable once built.
class Field {
 public:
  Field(SpatialGrid grid, std::vector<double> values);
  static Field constant(const SpatialGrid& grid, double value);

  const SpatialGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double max() const;
  double min() const;
  /// Piecewise-linear interpolation with constant extension outside the grid.
  double at(double x) const;

 private:
  SpatialGrid grid_;
  std::vector<double> values_;
};

Field sample(const SpatialGrid& grid, const std::function<double(double)>& fn);
double eval(const Field& f, double x);

struct WindowSup {
  double value = 0.0;
  bool empty = true;
  std::size_t points = 0;
};

/// max |a - b| over grid points in [lo, hi]; empty (value 0) when the window misses the grid.
WindowSup sup_diff_on(const Field& a, const Field& b, double lo, double hi);
/// max |a| over grid points in [lo, hi].
WindowSup sup_on(const Field& a, double lo, double hi);
double sup_norm_diff(const Field& a, const Field& b);

/// Indices i with lo <= x_i <= hi, as a half-open range [first, last).
std::pair<std::size_t, std::size_t> window_indices(const SpatialGrid& grid, double lo, double hi);

// CSV with header `x,u`, 17 significant digits.
void write_field_csv(std::ostream& os, const Field& f);
void write_field_csv(const std::string& path, const Field& f);
Field read_field_csv(std::istream& is);
Field read_field_csv(const std::string& path);

}  // namespace ide

namespace ide {

struct XYColumns {
  std::vector<double> x;
  std::vector<double> y;
};

/// Two-column numeric CSV with a single header row.
XYColumns read_xy_csv(std::istream& is);
XYColumns read_xy_csv(const std::string& path);

}  // namespace ide
