#pragma once

#include <functional>
#include <vector>

#include "ide/grid.hpp"
#include "ide/habitat.hpp"
#include "ide/kernel.hpp"

namespace ide {

/// Q[u](x) = \int f(x - y, u(x - y)) k(y) dy on a truncated grid.
///
/// The growth term is evaluated on the grid widened by the kernel stencil. Points
/// beyond [x_min, x_max] read the edge value of u and use the limiting map f_-/f_+.
class EvolutionOp {
 public:
  EvolutionOp(Kernel kernel, Habitat habitat, SpatialGrid grid);

  const Kernel& kernel() const { return kernel_; }
  const Habitat& habitat() const { return habitat_; }
  const SpatialGrid& grid() const { return grid_; }
  const Stencil& stencil() const { return stencil_; }

  Field apply(const Field& u) const;
  /// Homogeneous operator Q_side with f replaced by f_side.
  Field apply_limit(const Field& u, Side side) const;

 private:
  Field convolve_growth(const Field& u, const std::function<double(std::ptrdiff_t, double)>& growth) const;

  Kernel kernel_;
  Habitat habitat_;
  SpatialGrid grid_;
  Stencil stencil_;
};

/// L[u](x) = \int R(x - y) u(x - y) k(y) dy; u is extended by its edge values.
Field apply_linear(const std::function<double(double)>& R, const Kernel& kernel, const Field& u);
Field apply_linear(const std::function<double(double)>& R, const Stencil& stencil, const Field& u);

struct Snapshot {
  int step = 0;
  Field u;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  /// sup |u_{k+1} - u_k| for every step k.
  std::vector<double> deltas;

  const Field& final() const { return snapshots.back().u; }
};

using SnapshotCallback = std::function<void(const Snapshot&)>;

Trajectory iterate(const EvolutionOp& op, const Field& u0, int n_steps, int snapshot_every = 1,
                   const SnapshotCallback& on_snapshot = {});

}  // namespace ide
