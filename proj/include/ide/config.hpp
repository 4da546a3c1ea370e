#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ide/fixedpoint.hpp"
#include "json.hpp"

namespace ide {

using Json = nlohmann::ordered_json;

enum class Command { speed, simulate, fixed_point, counterexample, check };
std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command c);

struct GridSpec {
  double x_min = -60.0;
  double x_max = 240.0;
  std::size_t n = 3001;
};

struct KernelSpec {
  std::string type = "gaussian";  ///< gaussian | laplace | table
  double mean = 0.0;
  double variance = 1.0;
  double rate = 1.0;
  double shift = 0.0;
  double truncation_radius = 0.0;
  std::string path;
};

struct HabitatSpec {
  std::string type = "beverton_holt";  ///< beverton_holt | counterexample_g | counterexample_h | product
  double r_minus = 0.5;
  double r_plus = 2.718281828459045;
  double K = 1.0;
  double steepness = 1.0;
  double center = 0.0;
  std::optional<double> beta;  ///< empty: beta0 from the spectral radius
  double margin = 0.25;
  std::optional<double> coefficient;  ///< constant a(x)
  std::string coefficient_path;       ///< tabulated a(x)
  std::string nonlinearity = "plateau";
  double k = 1.0;
  std::vector<double> caps;
};

struct InitialSpec {
  std::string shape = "bump";  ///< bump | step | constant | csv
  double center = 0.0;
  double width = 2.0;
  double height = 1.0;
  double at = 0.0;
  std::string side = "left";
  double value = 0.0;
  std::string path;
};

struct SimulateSpec {
  int steps = 80;
  int snapshot_every = 10;
};

struct DiagnosticsSpec {
  double epsilon = 0.5;
  std::vector<double> levels{0.5};
  double tolerance = 1e-3;
  double left_tolerance = 1e-3;
  double tail_fraction = 0.1;
  int burn_in = 10;
  bool upward = true;
  bool annihilation = true;
  /// Second initial datum; enables the attractivity diagnostic.
  std::optional<InitialSpec> attractivity;
  double attractivity_epsilon = 0.3;
};

struct FixedPointSpec {
  double tol = 1e-10;
  int max_iters = 5000;
  std::optional<double> cap;  ///< empty: the smallest habitat cap
  bool certificate = true;
  double gamma = 0.1;
  double epsilon = 0.3;
};

struct SpeedSpec {
  SpeedOptions options;
  int curve_points = 200;
};

struct CounterexampleSpec {
  double margin = 0.25;
  GridSpec grid{-30.0, 30.0, 1201};
};

struct CheckSpec {
  std::uint64_t seed = 20240917;
  std::vector<std::string> modules;
};

struct OutputSpec {
  std::string dir = "out";
  bool svg = false;
};

struct RunConfig {
  Command command = Command::speed;
  GridSpec grid;
  KernelSpec kernel;
  HabitatSpec habitat;
  InitialSpec initial;
  SimulateSpec simulate;
  DiagnosticsSpec diagnostics;
  FixedPointSpec fixed_point;
  SpeedSpec speed;
  CounterexampleSpec counterexample;
  CheckSpec check;
  OutputSpec output;
  /// Directory against which relative file paths in the config are resolved.
  std::string base_dir = ".";
};

/// Validates and resolves `doc` for `command`. Unknown keys and bad values throw ConfigError
/// naming the offending field path (e.g. `kernel.variance`).
RunConfig parse_config(const Json& doc, Command command, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path, Command command);
Json load_json(const std::string& path);

/// Fully resolved configuration, defaults included.
Json to_json(const RunConfig& cfg);

SpatialGrid build_grid(const GridSpec& spec);
Kernel build_kernel(const RunConfig& cfg);
/// Resolves beta = "auto" through the spectral radius when needed.
Habitat build_habitat(const RunConfig& cfg);
Field build_initial(const InitialSpec& spec, const SpatialGrid& grid, const std::string& base_dir,
                    const std::string& path = "initial");

std::string resolve_path(const std::string& base_dir, const std::string& path);

}  // namespace ide
