#pragma once

#include <string>
#include <vector>

#include "ide/config.hpp"
#include "ide/diagnostics.hpp"

namespace ide {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInconclusive = 2, kExitConfig = 3 };

int exit_code_for(Verdict v);

struct RunOutcome {
  std::string name;
  std::string dir;
  Verdict verdict = Verdict::pass;
  int exit_code = kExitPass;
  std::string summary;  ///< human-readable report printed by the CLI
  Json results = Json::object();
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;
};

RunOutcome run_speed(const RunConfig& cfg, const std::string& dir);
RunOutcome run_simulate(const RunConfig& cfg, const std::string& dir);
RunOutcome run_fixed_point(const RunConfig& cfg, const std::string& dir);
RunOutcome run_counterexample(const RunConfig& cfg, const std::string& dir);
RunOutcome run_check(const RunConfig& cfg, const std::string& dir);

/// Dispatches on cfg.command, maps errors to exit codes and always writes manifest.json.
RunOutcome execute(const RunConfig& cfg, const std::string& dir);

struct SweepEntry {
  std::string name;
  RunConfig config;
};

/// Sweep file: {"command": ..., "base": {config}, "runs": [{"name": ..., "set": {patch}}, ...]}.
/// Each run is base merge-patched with its "set" object.
std::vector<SweepEntry> load_sweep(const std::string& path);

/// Runs every entry in its own subdirectory of `dir` on `jobs` worker threads.
std::vector<RunOutcome> run_sweep(const std::vector<SweepEntry>& entries, const std::string& dir, int jobs);
int sweep_exit_code(const std::vector<RunOutcome>& outcomes);

}  // namespace ide
