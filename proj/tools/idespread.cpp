#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ide/errors.hpp"
#include "ide/output.hpp"
#include "ide/runs.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  bool svg = false;
  int jobs = 1;
};

int run_single(ide::Command command, const Flags& f) {
  ide::RunConfig cfg;
  try {
    cfg = f.config.empty() ? ide::parse_config(ide::Json::object(), command) : ide::load_config(f.config, command);
  } catch (const ide::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ide::kExitConfig;
  }
  if (f.svg) cfg.output.svg = true;
  const std::string dir = f.out.empty() ? cfg.output.dir : f.out;
  const ide::RunOutcome out = ide::execute(cfg, dir);
  (out.exit_code == ide::kExitPass ? std::cout : std::cerr) << out.summary;
  std::cout << "outputs: " << dir << " (exit " << out.exit_code << ")\n";
  return out.exit_code;
}

int run_sweep(const Flags& f) {
  std::vector<ide::SweepEntry> entries;
  try {
    entries = ide::load_sweep(f.config);
  } catch (const ide::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ide::kExitConfig;
  }
  for (auto& e : entries) e.config.output.svg = e.config.output.svg || f.svg;
  const std::string dir = f.out.empty() ? "out" : f.out;
  const auto outcomes = ide::run_sweep(entries, dir, f.jobs);
  for (const auto& o : outcomes) {
    std::cout << o.name << ": " << (o.exit_code == ide::kExitConfig ? "error" : std::string(ide::to_string(o.verdict)))
              << " (exit " << o.exit_code << ", " << o.wall_seconds << " s)\n";
    if (o.exit_code != ide::kExitPass) std::cerr << "  " << o.summary;
  }
  return ide::sweep_exit_code(outcomes);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spreading speeds, fronts and fixed points of spatially heterogeneous integro-difference equations"};
  app.set_version_flag("--version", std::string(ide::kVersion));
  app.require_subcommand(1);

  Flags flags;
  struct Sub {
    const char* name;
    const char* help;
    bool config_required;
  };
  const Sub subs[] = {
      {"speed", "leftward and rightward spreading speeds of the +inf limit", true},
      {"simulate", "iterate the model and run convergence diagnostics", true},
      {"fixed-point", "maximal fixed point below a cap, with a nonexistence certificate", true},
      {"counterexample", "reproduce the pulse / front counterexample", false},
      {"check", "run the property battery", false},
  };
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    auto* opt = sc->add_option("--config", flags.config, "JSON run configuration")->check(CLI::ExistingFile);
    if (s.config_required) opt->required();
    sc->add_option("--out", flags.out, "output directory (overrides output.dir)");
    sc->add_flag("--svg", flags.svg, "also write SVG plots");
  }
  auto* sweep = app.add_subcommand("sweep", "run a batch of configurations concurrently");
  sweep->add_option("--config", flags.config, "sweep file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", flags.out, "output directory (one subdirectory per run)");
  sweep->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_flag("--svg", flags.svg, "also write SVG plots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ide::kExitConfig;
  }

  try {
    if (sweep->parsed()) return run_sweep(flags);
    for (const auto& s : subs) {
      if (app.get_subcommand(s.name)->parsed()) return run_single(*ide::parse_command(s.name), flags);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ide::kExitFail;
  }
  return ide::kExitConfig;
}
