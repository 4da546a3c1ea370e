#pragma once

#include <string>
#include <vector>

#include "ide/config.hpp"

namespace ide {

inline constexpr const char* kVersion = "0.1.0";

/// Numeric CSV with a header row; NaN cells are written empty. 17 significant digits.
void write_table(const std::string& path, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  ///< NaN breaks the line
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
};

/// Minimal standalone SVG line chart.
void write_svg(const std::string& path, const PlotSpec& spec, const std::vector<PlotSeries>& series);

struct Manifest {
  Json config;
  std::vector<std::string> outputs;  ///< relative to the run directory
  Json results = Json::object();
  std::string status = "pass";
  int exit_code = 0;
  double wall_seconds = 0.0;
};

/// Writes manifest.json into `dir`.
void write_manifest(const std::string& dir, const Manifest& m);

void ensure_directory(const std::string& dir);

}  // namespace ide
