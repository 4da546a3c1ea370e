#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ide/spectral.hpp"

namespace ide {

/// Default fixtures shared by the property battery, the acceptance runs and the CLI defaults.
namespace fixtures {

/// Beverton-Holt habitat with R(-inf) = 1/2, R(+inf) = e, K = 1.
Habitat beverton_holt_habitat();
Kernel standard_kernel();  ///< gaussian(0, 1)
SpatialGrid beverton_holt_grid();  ///< [-60, 240], spacing 0.1
SpatialGrid translation_grid();    ///< [-100, 100], spacing 0.1

/// cos^2 bump of half-width `width`.
Field bump(const SpatialGrid& grid, double center, double width, double height);

}  // namespace fixtures

struct PropertyResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct PropertyOptions {
  std::uint64_t seed = 20240917;
  /// Module names to run; empty runs all.
  std::vector<std::string> modules;
};

std::vector<PropertyResult> run_property_battery(const PropertyOptions& opts = {});

}  // namespace ide
