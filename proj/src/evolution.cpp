#include "ide/evolution.hpp"

#include <cmath>
#include <string>

#include "ide/errors.hpp"

namespace ide {
namespace {

void require_nonnegative(const Field& u) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 0.0) throw NegativeState(i);
  }
}

// v_i = sum_k w_k F[i - j_k], with F indexed from e0 = -last.
std::vector<double> stencil_sum(const Stencil& s, const std::vector<double>& F, std::size_t n) {
  std::vector<double> v(n, 0.0);
  const std::ptrdiff_t e0 = -s.last();
  const std::size_t m = s.weights.size();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    // F index of (i - j) is i - j - e0 = i + last - j; j = first + k.
    const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(i) - e0 - s.first;
    for (std::size_t k = 0; k < m; ++k) acc += s.weights[k] * F[static_cast<std::size_t>(base - static_cast<std::ptrdiff_t>(k))];
    v[i] = acc;
  }
  return v;
}

}  // namespace

EvolutionOp::EvolutionOp(Kernel kernel, Habitat habitat, SpatialGrid grid)
    : kernel_(std::move(kernel)),
      habitat_(std::move(habitat)),
      grid_(grid),
      stencil_(kernel_.quadrature_weights(grid_.spacing())) {}

Field EvolutionOp::convolve_growth(const Field& u,
                                   const std::function<double(std::ptrdiff_t, double)>& growth) const {
  if (!(u.grid() == grid_)) throw GridMismatch();
  require_nonnegative(u);
  const auto n = static_cast<std::ptrdiff_t>(grid_.size());
  const std::ptrdiff_t e0 = -stencil_.last();
  const std::ptrdiff_t e1 = n - 1 - stencil_.first;
  std::vector<double> F(static_cast<std::size_t>(e1 - e0 + 1));
  for (std::ptrdiff_t e = e0; e <= e1; ++e) {
    const std::size_t clamped = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(e, 0, n - 1));
    F[static_cast<std::size_t>(e - e0)] = growth(e, u[clamped]);
  }
  auto v = stencil_sum(stencil_, F, grid_.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw NonFiniteValue(i, "evolution output");
    if (v[i] < 0.0) throw NonFiniteValue(i, "evolution output is negative; habitat misconfigured");
  }
  return Field(grid_, std::move(v));
}

Field EvolutionOp::apply(const Field& u) const {
  const auto n = static_cast<std::ptrdiff_t>(grid_.size());
  return convolve_growth(u, [&](std::ptrdiff_t e, double ue) {
    if (e < 0) return habitat_.limit(Side::minus, ue);
    if (e >= n) return habitat_.limit(Side::plus, ue);
    return habitat_(grid_.x(e), ue);
  });
}

Field EvolutionOp::apply_limit(const Field& u, Side side) const {
  return convolve_growth(u, [&](std::ptrdiff_t, double ue) { return habitat_.limit(side, ue); });
}

Field apply_linear(const std::function<double(double)>& R, const Stencil& s, const Field& u) {
  const auto& grid = u.grid();
  if (std::abs(s.h - grid.spacing()) > 1e-12 * grid.spacing()) {
    throw InvalidArgument("stencil spacing does not match the field grid");
  }
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  const std::ptrdiff_t e0 = -s.last();
  const std::ptrdiff_t e1 = n - 1 - s.first;
  std::vector<double> F(static_cast<std::size_t>(e1 - e0 + 1));
  for (std::ptrdiff_t e = e0; e <= e1; ++e) {
    const std::size_t clamped = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(e, 0, n - 1));
    F[static_cast<std::size_t>(e - e0)] = R(grid.x(e)) * u[clamped];
  }
  auto v = stencil_sum(s, F, grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw NonFiniteValue(i, "linear operator output");
  }
  return Field(grid, std::move(v));
}

Field apply_linear(const std::function<double(double)>& R, const Kernel& kernel, const Field& u) {
  return apply_linear(R, kernel.quadrature_weights(u.grid().spacing()), u);
}

Trajectory iterate(const EvolutionOp& op, const Field& u0, int n_steps, int snapshot_every,
                   const SnapshotCallback& on_snapshot) {
  if (n_steps < 0) throw InvalidArgument("n_steps must be nonnegative");
  if (snapshot_every < 1) throw InvalidArgument("snapshot_every must be at least 1");
  try {
    require_nonnegative(u0);
  } catch (const Error& e) {
    throw Error(std::string("step 0: ") + e.what());
  }
  Trajectory traj;
  traj.deltas.reserve(static_cast<std::size_t>(n_steps));
  traj.snapshots.push_back({0, u0});
  if (on_snapshot) on_snapshot(traj.snapshots.back());
  Field u = u0;
  for (int k = 1; k <= n_steps; ++k) {
    try {
      Field next = op.apply(u);
      traj.deltas.push_back(sup_norm_diff(next, u));
      u = std::move(next);
    } catch (const Error& e) {
      throw Error("step " + std::to_string(k) + ": " + e.what());
    }
    if (k % snapshot_every == 0 || k == n_steps) {
      traj.snapshots.push_back({k, u});
      if (on_snapshot) on_snapshot(traj.snapshots.back());
    }
  }
  return traj;
}

}  // namespace ide
