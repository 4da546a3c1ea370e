#include "ide/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ide/errors.hpp"

namespace ide {

SpatialGrid::SpatialGrid(double x_min, double x_max, std::size_t n)
    : x_min_(x_min), x_max_(x_max), n_(n), h_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw InvalidArgument("grid requires finite x_min < x_max");
  }
  if (n < 2) throw InvalidArgument("grid requires at least two points");
  h_ = (x_max - x_min) / static_cast<double>(n - 1);
}

SpatialGrid SpatialGrid::with_spacing(double x_min, double x_max, double h) {
  if (!(h > 0.0)) throw InvalidArgument("grid spacing must be positive");
  const auto cells = static_cast<std::size_t>(std::llround((x_max - x_min) / h));
  return SpatialGrid(x_min, x_max, std::max<std::size_t>(cells, 1) + 1);
}

Field::Field(SpatialGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("field length " + std::to_string(values_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw NonFiniteValue(i, "field");
  }
}

Field Field::constant(const SpatialGrid& grid, double value) {
  return Field(grid, std::vector<double>(grid.size(), value));
}

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }
double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Field::at(double x) const {
  if (x <= grid_.x_min()) return values_.front();
  if (x >= grid_.x_max()) return values_.back();
  const double s = (x - grid_.x_min()) / grid_.spacing();
  // node coordinates x_min + i h may not invert exactly
  const double nearest = std::round(s);
  if (std::abs(s - nearest) <= 1e-9) return values_[static_cast<std::size_t>(nearest)];
  auto i = static_cast<std::size_t>(s);
  if (i >= values_.size() - 1) return values_.back();
  const double t = s - static_cast<double>(i);
  return (1.0 - t) * values_[i] + t * values_[i + 1];
}

Field sample(const SpatialGrid& grid, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = fn(grid.x(static_cast<std::ptrdiff_t>(i)));
    if (!std::isfinite(v[i])) throw NonFiniteValue(i, "sample");
  }
  return Field(grid, std::move(v));
}

double eval(const Field& f, double x) { return f.at(x); }

std::pair<std::size_t, std::size_t> window_indices(const SpatialGrid& grid, double lo, double hi) {
  if (!(lo <= hi)) return {0, 0};
  const double h = grid.spacing();
  const double slack = 1e-9;
  const double a = std::ceil((lo - grid.x_min()) / h - slack);
  const double b = std::floor((hi - grid.x_min()) / h + slack);
  const double last = static_cast<double>(grid.size() - 1);
  const double first = std::max(a, 0.0);
  const double final = std::min(b, last);
  if (first > final) return {0, 0};
  return {static_cast<std::size_t>(first), static_cast<std::size_t>(final) + 1};
}

WindowSup sup_diff_on(const Field& a, const Field& b, double lo, double hi) {
  if (!(a.grid() == b.grid())) throw GridMismatch();
  if (lo > hi) throw InvalidArgument("window requires lo <= hi");
  WindowSup out;
  const auto [first, last] = window_indices(a.grid(), lo, hi);
  for (std::size_t i = first; i < last; ++i) {
    out.value = std::max(out.value, std::abs(a[i] - b[i]));
  }
  out.points = last - first;
  out.empty = out.points == 0;
  return out;
}

WindowSup sup_on(const Field& a, double lo, double hi) {
  WindowSup out;
  if (lo > hi) return out;
  const auto [first, last] = window_indices(a.grid(), lo, hi);
  for (std::size_t i = first; i < last; ++i) out.value = std::max(out.value, std::abs(a[i]));
  out.points = last - first;
  out.empty = out.points == 0;
  return out;
}

double sup_norm_diff(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void write_field_csv(std::ostream& os, const Field& f) {
  os << "x,u\n" << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << f.grid().x(static_cast<std::ptrdiff_t>(i)) << ',' << f[i] << '\n';
  }
}

void write_field_csv(const std::string& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_field_csv(os, f);
}

XYColumns read_xy_csv(std::istream& is) {
  XYColumns cols;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      // Accept headerless files: only skip the first row if it is not numeric.
      char* end = nullptr;
      std::strtod(line.c_str(), &end);
      if (end == line.c_str()) continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x = 0.0;
    double y = 0.0;
    if (!(ss >> x >> y)) throw Error("malformed CSV row at line " + std::to_string(lineno));
    cols.x.push_back(x);
    cols.y.push_back(y);
  }
  return cols;
}

XYColumns read_xy_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  return read_xy_csv(is);
}

Field read_field_csv(std::istream& is) {
  auto cols = read_xy_csv(is);
  if (cols.x.size() < 2) throw InvalidArgument("field CSV needs at least two rows");
  SpatialGrid grid(cols.x.front(), cols.x.back(), cols.x.size());
  for (std::size_t i = 0; i < cols.x.size(); ++i) {
    const double expected = grid.x(static_cast<std::ptrdiff_t>(i));
    if (std::abs(cols.x[i] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw InvalidArgument("field CSV is not on a uniform grid (row " + std::to_string(i) + ")");
    }
  }
  return Field(grid, std::move(cols.y));
}

Field read_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  return read_field_csv(is);
}

}  // namespace ide
