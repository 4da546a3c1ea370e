#include "ide/runs.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "ide/errors.hpp"
#include "ide/output.hpp"
#include "ide/properties.hpp"
#include "ide/spectral.hpp"

namespace ide {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Rethrows anything from `body` with the stage name prefixed; ConfigError keeps its type.
template <class Fn>
auto stage(const std::string& label, Fn&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ConfigError&) {
    throw;
  } catch (const HypothesisViolation& e) {
    throw HypothesisViolation(label + ": " + e.what());
  } catch (const Error& e) {
    throw Error(label + ": " + e.what());
  }
}

class Run {
 public:
  explicit Run(std::string dir) : dir_(std::move(dir)) { ensure_directory(dir_); }

  std::string path(const std::string& rel) {
    const auto p = std::filesystem::path(dir_) / rel;
    if (p.has_parent_path()) ensure_directory(p.parent_path().string());
    outputs_.push_back(rel);
    return p.string();
  }

  void field(const std::string& rel, const Field& f) { write_field_csv(path(rel), f); }

  RunOutcome finish(Verdict v, std::string summary, Json results) {
    RunOutcome out;
    out.dir = dir_;
    out.verdict = v;
    out.exit_code = exit_code_for(v);
    out.summary = std::move(summary);
    out.results = std::move(results);
    out.outputs = std::move(outputs_);
    return out;
  }

 private:
  std::string dir_;
  std::vector<std::string> outputs_;
};

std::string fmt(double x, int precision = 10) {
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

class Table {
 public:
  void row(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void row(const std::string& key, double value) { row(key, fmt(value)); }
  std::string str() const {
    std::size_t w = 0;
    for (const auto& r : rows_) w = std::max(w, r.first.size());
    std::ostringstream os;
    for (const auto& [k, v] : rows_) os << std::left << std::setw(static_cast<int>(w) + 2) << k << v << '\n';
    return os.str();
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

Json gap_json(const GapSeries& s) {
  return Json{{"name", s.name},
              {"verdict", std::string(to_string(s.verdict))},
              {"tolerance", s.tolerance},
              {"tail_max", s.tail_max},
              {"final", s.gap.empty() ? kNaN : s.gap.back()}};
}

void write_gap(Run& run, const GapSeries& s) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    rows.push_back({static_cast<double>(s.steps[i]), s.gap[i], s.clipped[i] ? 1.0 : 0.0, s.empty[i] ? 1.0 : 0.0});
  }
  write_table(run.path("gaps/" + s.name + ".csv"), {"step", "gap", "clipped", "empty"}, rows);
}

void plot_gaps(Run& run, const std::string& rel, const std::string& title, const std::vector<const GapSeries*>& gaps) {
  std::vector<PlotSeries> series;
  for (const GapSeries* g : gaps) {
    PlotSeries p{g->name, {}, {}};
    for (std::size_t i = 0; i < g->steps.size(); ++i) {
      p.x.push_back(g->steps[i]);
      p.y.push_back(g->empty[i] ? kNaN : g->gap[i]);
    }
    series.push_back(std::move(p));
  }
  write_svg(run.path(rel), {title, "iteration n", "gap", true}, series);
}

bool identically_zero(const Field& u) { return u.max() == 0.0 && u.min() == 0.0; }

Json absent(const std::string& reason) { return Json{{"verdict", "absent"}, {"reason", reason}}; }

Json speed_json(const SpeedReport& r, double coef) {
  return Json{{"coefficient", coef},
              {"c_minus", r.c_minus},
              {"c_plus", r.c_plus},
              {"mu_minus", r.mu_minus},
              {"mu_plus", r.mu_plus},
              {"attainment_minus", std::string(to_string(r.attainment_minus))},
              {"attainment_plus", std::string(to_string(r.attainment_plus))},
              {"evaluations", r.evaluations}};
}

Json fixed_point_json(const FixedPointResult& r) {
  return Json{{"residual", r.residual},
              {"max", r.W.max()},
              {"tail_minus", r.tail_minus},
              {"tail_plus", r.tail_plus},
              {"classification", std::string(to_string(r.classification))},
              {"iterations", r.iterations},
              {"converged", r.converged}};
}

}  // namespace

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::pass: return kExitPass;
    case Verdict::fail: return kExitFail;
    case Verdict::inconclusive: return kExitInconclusive;
  }
  return kExitFail;
}

RunOutcome run_speed(const RunConfig& cfg, const std::string& dir) {
  Run run(dir);
  const Kernel k = stage("build.kernel", [&] { return build_kernel(cfg); });
  const Habitat hab = stage("build.habitat", [&] { return build_habitat(cfg); });
  const double coef = hab.d_plus();
  if (!(coef > 0.0)) throw HypothesisViolation("habitat '" + hab.name() + "' has d_plus = 0; speeds are undefined");
  const auto& opts = cfg.speed.options;
  const SpeedReport rep = stage("speed", [&] { return speed_report(coef, k, opts); });

  Table t;
  t.row("kernel", k.describe());
  t.row("habitat", hab.name());
  t.row("coefficient", coef);
  t.row("mgf_path", opts.path == MgfPath::analytic ? "analytic" : "quadrature");
  t.row("c_minus", rep.c_minus);
  t.row("mu_minus", rep.mu_minus);
  t.row("attainment_minus", std::string(to_string(rep.attainment_minus)));
  t.row("c_plus", rep.c_plus);
  t.row("mu_plus", rep.mu_plus);
  t.row("attainment_plus", std::string(to_string(rep.attainment_plus)));
  t.row("c_plus + c_minus", rep.c_plus + rep.c_minus);
  {
    std::ofstream os(run.path("speed_report.txt"));
    os << t.str();
  }

  const auto [dom_lo, dom_hi] = k.moment_domain();
  const double hi = std::min({opts.mu_hi, 0.999 * dom_hi, -0.999 * dom_lo});
  std::vector<std::vector<double>> rows;
  PlotSeries minus{"minus", {}, {}}, plus{"plus", {}, {}};
  const int n = cfg.speed.curve_points;
  for (int i = 0; i < n; ++i) {
    const double mu = opts.mu_lo * std::pow(hi / opts.mu_lo, static_cast<double>(i) / (n - 1));
    const double om = speed_objective(coef, k, Side::minus, mu, opts);
    const double op = speed_objective(coef, k, Side::plus, mu, opts);
    rows.push_back({mu, om, op});
    minus.x.push_back(mu);
    minus.y.push_back(om);
    plus.x.push_back(mu);
    plus.y.push_back(op);
  }
  write_table(run.path("objective.csv"), {"mu", "objective_minus", "objective_plus"}, rows);
  if (cfg.output.svg) write_svg(run.path("objective.svg"), {"speed objective", "mu", "(1/mu) ln(coef M)", false}, {minus, plus});
  return run.finish(Verdict::pass, t.str(), speed_json(rep, coef));
}

RunOutcome run_simulate(const RunConfig& cfg, const std::string& dir) {
  Run run(dir);
  const auto& d = cfg.diagnostics;
  const SpatialGrid grid = stage("build.grid", [&] { return build_grid(cfg.grid); });
  const Kernel k = stage("build.kernel", [&] { return build_kernel(cfg); });
  const Habitat hab = stage("build.habitat", [&] { return build_habitat(cfg); });
  const Field u0 = build_initial(cfg.initial, grid, cfg.base_dir);
  const EvolutionOp op = stage("build.operator", [&] { return EvolutionOp(k, hab, grid); });

  Json results;
  const HypothesisReport hyp = validate_hypotheses(hab);
  Json failed = Json::array();
  for (const auto& c : hyp.checks) {
    if (!c.passed) failed.push_back(c.name);
  }
  results["hypotheses"] = {{"passed", hyp.passed()}, {"failed", failed}};

  const Trajectory traj = stage("simulate.iterate", [&] { return iterate(op, u0, cfg.simulate.steps, 1); });

  std::vector<std::vector<std::string>> index;
  std::vector<PlotSeries> profiles;
  for (const auto& s : traj.snapshots) {
    if (s.step % cfg.simulate.snapshot_every != 0 && s.step != cfg.simulate.steps) continue;
    std::ostringstream name;
    name << "snapshots/u_" << std::setw(5) << std::setfill('0') << s.step << ".csv";
    run.field(name.str(), s.u);
    index.push_back({std::to_string(s.step), name.str(), s.step > 0 ? fmt(traj.deltas[s.step - 1], 17) : ""});
    PlotSeries p{"n = " + std::to_string(s.step), {}, {}};
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      p.x.push_back(grid.x(static_cast<std::ptrdiff_t>(i)));
      p.y.push_back(s.u[i]);
    }
    profiles.push_back(std::move(p));
  }
  {
    std::ofstream os(run.path("snapshots/index.csv"));
    os << "step,file,sup_delta\n";
    for (const auto& r : index) os << r[0] << ',' << r[1] << ',' << r[2] << '\n';
  }
  if (cfg.output.svg) write_svg(run.path("profiles.svg"), {"profiles", "x", "u", false}, profiles);

  // fronts
  std::vector<std::vector<double>> front_rows;
  Json fronts = Json::array();
  double peak = 0.0;
  for (const auto& s : traj.snapshots) peak = std::max(peak, s.u.max());
  for (double level : d.levels) {
    if (!(level < peak)) {
      fronts.push_back(Json{{"level", level}, {"speed", nullptr}, {"reason", "level never reached"}});
      continue;
    }
    const FrontTrace trace = track_front(traj, level);
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      front_rows.push_back({static_cast<double>(trace.steps[i]), level, trace.x_minus[i].value_or(kNaN),
                            trace.x_plus[i].value_or(kNaN), trace.max_value[i]});
    }
    Json fj{{"level", level}};
    try {
      const SpeedFit fit = estimate_speed(trace, d.burn_in);
      fj["speed"] = fit.slope;
      fj["r2"] = fit.r2;
      fj["points"] = fit.points;
    } catch (const InsufficientData& e) {
      fj["speed"] = nullptr;
      fj["reason"] = e.what();
    }
    fronts.push_back(fj);
  }
  write_table(run.path("fronts.csv"), {"step", "level", "x_minus", "x_plus", "max_u"}, front_rows);
  results["fronts"] = fronts;

  // diagnostics
  Verdict verdict = Verdict::pass;
  Json diag = Json::object();
  const bool zero = identically_zero(u0);
  std::optional<SpeedReport> sp;
  if (hab.d_plus() > 0.0) sp = stage("diagnostics.speeds", [&] { return speed_report(hab.d_plus(), k, cfg.speed.options); });
  if (sp) results["speeds"] = speed_json(*sp, hab.d_plus());
  const GapOptions window_opts{d.tolerance, d.tail_fraction};
  const GapOptions left_opts{d.left_tolerance, d.tail_fraction};

  if (!d.upward) {
    diag["upward"] = absent("disabled");
  } else if (zero) {
    diag["upward"] = absent("zero initial data");
  } else if (!sp || !(hab.d_plus() > 1.0) || !(sp->c_plus > 0.0) || !(sp->c_plus + sp->c_minus > 0.0)) {
    diag["upward"] = absent("requires d_plus > 1, c_plus > 0 and c_plus + c_minus > 0");
  } else {
    const double limit = 0.5 * std::min(sp->c_plus, sp->c_plus + sp->c_minus);
    if (!(d.epsilon < limit)) {
      throw ConfigError("diagnostics.epsilon", "upward convergence needs 0 < epsilon < " + fmt(limit, 6));
    }
    const double u_star = limit_fixed_point(hab);
    const UpwardConvergence uc = stage("diagnostics.upward", [&] {
      return upward_convergence(traj, u_star, d.epsilon, sp->c_plus, sp->c_minus, window_opts, left_opts);
    });
    write_gap(run, uc.window);
    write_gap(run, uc.left);
    if (cfg.output.svg) plot_gaps(run, "gaps/upward.svg", "upward convergence", {&uc.window, &uc.left});
    diag["upward"] = {{"verdict", std::string(to_string(uc.verdict))},
                      {"u_star", u_star},
                      {"window", gap_json(uc.window)},
                      {"left", gap_json(uc.left)}};
    verdict = combine(verdict, uc.verdict);
  }

  if (!d.annihilation) {
    diag["annihilation"] = absent("disabled");
  } else if (!sp) {
    diag["annihilation"] = absent("speeds undefined for d_plus = 0");
  } else if (u0[u0.size() - 1] > 0.0) {
    diag["annihilation"] = absent("initial data do not vanish at the right edge");
  } else {
    const Annihilation an = stage("diagnostics.annihilation", [&] { return annihilation(traj, d.epsilon, sp->c_plus, window_opts); });
    write_gap(run, an.ahead);
    std::vector<const GapSeries*> plotted{&an.ahead};
    if (an.uniform) {
      write_gap(run, *an.uniform);
      plotted.push_back(&*an.uniform);
    }
    if (cfg.output.svg) plot_gaps(run, "gaps/annihilation.svg", "annihilation ahead of the front", plotted);
    diag["annihilation"] = {{"verdict", std::string(to_string(an.verdict))},
                            {"support_edge", an.support_edge},
                            {"ahead", gap_json(an.ahead)}};
    if (an.uniform) diag["annihilation"]["uniform"] = gap_json(*an.uniform);
    verdict = combine(verdict, an.verdict);
  }

  if (!d.attractivity) {
    diag["attractivity"] = absent("no second initial datum configured");
  } else if (zero) {
    diag["attractivity"] = absent("zero initial data");
  } else if (!sp || !(sp->c_plus > d.attractivity_epsilon)) {
    throw ConfigError("diagnostics.attractivity.epsilon", "attractivity needs 0 < epsilon < c_plus");
  } else {
    const Field v0 = build_initial(*d.attractivity, grid, cfg.base_dir, "diagnostics.attractivity.initial");
    const Trajectory second = stage("diagnostics.attractivity", [&] { return iterate(op, v0, cfg.simulate.steps, 1); });
    const double cap = cfg.fixed_point.cap.value_or(hab.caps().empty() ? 0.0 : hab.caps().front());
    if (!(cap > 0.0)) throw ConfigError("fixed_point.cap", "required: habitat has no invariant caps");
    const FixedPointResult fp = stage("diagnostics.attractivity.fixed_point", [&] {
      return solve_from_cap(op, cap, FixedPointOptions{cfg.fixed_point.tol, cfg.fixed_point.max_iters});
    });
    run.field("fixed_point.csv", fp.W);
    const bool supported = sp->c_minus > 0.0 && sp->c_plus > 0.0;
    const Attractivity at = stage("diagnostics.attractivity", [&] {
      return attractivity(traj, second, fp.W, d.attractivity_epsilon, sp->c_plus, supported, window_opts);
    });
    write_gap(run, at.first);
    write_gap(run, at.second);
    if (cfg.output.svg) plot_gaps(run, "gaps/attractivity.svg", "distance to the fixed point", {&at.first, &at.second});
    diag["attractivity"] = {{"verdict", std::string(to_string(at.verdict))},
                            {"theory_supported", supported},
                            {"fixed_point", fixed_point_json(fp)},
                            {"first", gap_json(at.first)},
                            {"second", gap_json(at.second)}};
    verdict = combine(verdict, at.verdict);
  }
  results["diagnostics"] = diag;

  Table t;
  t.row("steps", std::to_string(cfg.simulate.steps));
  t.row("final max u", traj.final().max());
  if (sp) {
    t.row("c_minus", sp->c_minus);
    t.row("c_plus", sp->c_plus);
  }
  for (const auto& f : fronts) {
    if (f.contains("speed") && !f["speed"].is_null()) {
      t.row("front speed @ " + fmt(f["level"].get<double>(), 6), f["speed"].get<double>());
    }
  }
  for (const auto& [name, v] : diag.items()) t.row(name, v["verdict"].get<std::string>());
  t.row("verdict", std::string(to_string(verdict)));
  return run.finish(verdict, t.str(), results);
}

RunOutcome run_fixed_point(const RunConfig& cfg, const std::string& dir) {
  Run run(dir);
  const SpatialGrid grid = stage("build.grid", [&] { return build_grid(cfg.grid); });
  const Kernel k = stage("build.kernel", [&] { return build_kernel(cfg); });
  const Habitat hab = stage("build.habitat", [&] { return build_habitat(cfg); });
  if (!hab.monotone_in_u()) {
    throw HypothesisViolation("habitat '" + hab.name() +
                              "' is not monotone in u; monotone fixed-point iteration is refused");
  }
  const EvolutionOp op(k, hab, grid);
  const double cap = cfg.fixed_point.cap.value_or(hab.caps().empty() ? 0.0 : hab.caps().front());
  if (!(cap > 0.0)) throw ConfigError("fixed_point.cap", "required: habitat has no invariant caps");
  const FixedPointOptions opts{cfg.fixed_point.tol, cfg.fixed_point.max_iters};
  const FixedPointResult fp = stage("fixed_point.solve", [&] { return solve_from_cap(op, cap, opts); });
  run.field("W.csv", fp.W);
  if (cfg.output.svg) {
    PlotSeries p{"W", {}, {}};
    for (std::size_t i = 0; i < fp.W.size(); ++i) {
      p.x.push_back(grid.x(static_cast<std::ptrdiff_t>(i)));
      p.y.push_back(fp.W[i]);
    }
    write_svg(run.path("W.svg"), {"fixed point", "x", "W", false}, {p});
  }

  Json results{{"cap", cap}, {"fixed_point", fixed_point_json(fp)}};
  Verdict verdict = fp.converged ? Verdict::pass : Verdict::fail;
  Table t;
  t.row("habitat", hab.name());
  t.row("cap", cap);
  t.row("residual", fp.residual);
  t.row("iterations", std::to_string(fp.iterations));
  t.row("classification", std::string(to_string(fp.classification)));
  t.row("tail_minus", fp.tail_minus);
  t.row("tail_plus", fp.tail_plus);
  t.row("max W", fp.W.max());

  if (cfg.fixed_point.certificate) {
    const auto cert = stage("fixed_point.certificate", [&] {
      const LinearEnvelope env = build_envelope(hab, cfg.fixed_point.gamma, hab.caps().empty() ? cap : hab.caps().back());
      return nonexistence_certificate(op, env, k, cfg.fixed_point.epsilon);
    });
    Json cj{{"granted", cert.granted}, {"scope", cert.scope}};
    if (cert.granted) {
      cj["c_star_minus_L"] = cert.c_star_minus_L;
      cj["mu_eps"] = cert.decay->mu_eps;
      cj["final_sup"] = cert.final_sup;
      cj["tail_bounded"] = cert.tail->bounded;
      cj["tail_A"] = cert.tail->A;
      if (fp.classification != Classification::zero) verdict = Verdict::fail;
      t.row("certificate", "granted (" + cert.scope + ")");
    } else {
      cj["refusal"] = cert.refusal;
      t.row("certificate", "refused: " + cert.refusal);
    }
    results["certificate"] = cj;
  }
  t.row("verdict", std::string(to_string(verdict)));
  return run.finish(verdict, t.str(), results);
}

RunOutcome run_counterexample(const RunConfig& cfg, const std::string& dir) {
  Run run(dir);
  CounterexampleOptions opts;
  opts.margin = cfg.counterexample.margin;
  opts.speed = cfg.speed.options;
  const SpatialGrid grid = build_grid(cfg.counterexample.grid);
  const CounterexampleReport rep = counterexample_suite(grid, opts);
  run.field("W_lower.csv", rep.lower->W);
  run.field("W_upper.csv", rep.upper->W);
  run.field("W_half_beta.csv", rep.half_beta->W);
  run.field("eigenfield.csv", rep.spectral->eigenfield);
  if (cfg.output.svg) {
    PlotSeries lo{"W lower (g)", {}, {}}, up{"W upper (h)", {}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid.x(static_cast<std::ptrdiff_t>(i));
      lo.x.push_back(x);
      lo.y.push_back(rep.lower->W[i]);
      up.x.push_back(x);
      up.y.push_back(rep.upper->W[i]);
    }
    write_svg(run.path("fixed_points.svg"), {"counterexample fixed points", "x", "W", false}, {lo, up});
  }

  struct Check {
    std::string name;
    bool ok;
  };
  const auto& lo = *rep.lower;
  const auto& up = *rep.upper;
  const std::vector<Check> checks = {
      {"rho(L_beta0) > 1", rep.rho_beta0 > 1.0},
      {"beta-linearity < 1e-8", rep.linearity_error < 1e-8},
      {"lower residual < 1e-8", lo.residual < 1e-8},
      {"lower is a pulse", lo.classification == Classification::pulse && lo.W.max() > 1e-3 && lo.tail_minus < 1e-4 &&
                               lo.tail_plus < 1e-4},
      {"g collapses at beta0/2", rep.half_beta->W.max() < 1e-8},
      {"upper residual < 1e-8", up.residual < 1e-8},
      {"upper is a front to 1", up.classification == Classification::front && std::abs(up.tail_plus - 1.0) < 1e-3},
      {"upper >= lower", rep.ordering_gap >= 0.0},
      {"contrast", rep.contrast_holds},
  };
  Verdict verdict = Verdict::pass;
  Json cj = Json::object();
  for (const auto& c : checks) {
    cj[c.name] = c.ok;
    if (!c.ok) verdict = Verdict::fail;
  }

  Table t;
  t.row("c_minus(h)", rep.speeds_h.c_minus);
  t.row("c_plus(h)", rep.speeds_h.c_plus);
  t.row("rho(L_1)", rep.rho_L1);
  t.row("beta0", rep.beta0);
  t.row("rho(L_beta0)", rep.rho_beta0);
  t.row("beta-linearity error", rep.linearity_error);
  t.row("W lower: max", lo.W.max());
  t.row("W lower: residual", lo.residual);
  t.row("W lower: class", std::string(to_string(lo.classification)));
  t.row("W upper: tails", fmt(up.tail_minus, 6) + " / " + fmt(up.tail_plus, 6));
  t.row("W upper: residual", up.residual);
  t.row("W upper: class", std::string(to_string(up.classification)));
  t.row("min(W upper - W lower)", rep.ordering_gap);
  t.row("h linear-controlled", rep.h_linear_controlled ? "yes" : "no");
  for (const auto& c : checks) t.row("check: " + c.name, c.ok ? "pass" : "FAIL");
  t.row("verdict", std::string(to_string(verdict)));

  Json results{{"speeds_h", speed_json(rep.speeds_h, std::numbers::e)},
               {"rho_L1", rep.rho_L1},
               {"beta0", rep.beta0},
               {"rho_beta0", rep.rho_beta0},
               {"linearity_error", rep.linearity_error},
               {"power_iterations", rep.spectral->iterations},
               {"lower", fixed_point_json(lo)},
               {"half_beta_max", rep.half_beta->W.max()},
               {"upper", fixed_point_json(up)},
               {"ordering_gap", rep.ordering_gap},
               {"h_linear_controlled", rep.h_linear_controlled},
               {"contrast_holds", rep.contrast_holds},
               {"statement", rep.statement},
               {"checks", cj}};
  return run.finish(verdict, t.str() + "\n" + rep.statement + "\n", results);
}

RunOutcome run_check(const RunConfig& cfg, const std::string& dir) {
  Run run(dir);
  PropertyOptions opts;
  opts.seed = cfg.check.seed;
  opts.modules = cfg.check.modules;
  const auto results = run_property_battery(opts);
  Verdict verdict = Verdict::pass;
  Json list = Json::array();
  std::ostringstream os;
  for (const auto& r : results) {
    if (!r.passed) verdict = Verdict::fail;
    list.push_back({{"module", r.module}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    os << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(12) << r.module << std::setw(40) << r.name << r.detail
       << '\n';
  }
  {
    std::ofstream f(run.path("check_report.txt"));
    f << os.str();
  }
  if (results.empty()) verdict = Verdict::inconclusive;
  os << results.size() << " properties, verdict " << to_string(verdict) << '\n';
  return run.finish(verdict, os.str(), Json{{"properties", list}});
}

RunOutcome execute(const RunConfig& cfg, const std::string& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome out;
  try {
    switch (cfg.command) {
      case Command::speed: out = run_speed(cfg, dir); break;
      case Command::simulate: out = run_simulate(cfg, dir); break;
      case Command::fixed_point: out = run_fixed_point(cfg, dir); break;
      case Command::counterexample: out = run_counterexample(cfg, dir); break;
      case Command::check: out = run_check(cfg, dir); break;
    }
  } catch (const ConfigError& e) {
    out = RunOutcome{};
    out.verdict = Verdict::fail;
    out.exit_code = kExitConfig;
    out.summary = std::string("config error: ") + e.what() + "\n";
    out.results = {{"error", e.what()}, {"kind", "config"}, {"field", e.path()}};
  } catch (const HypothesisViolation& e) {
    out = RunOutcome{};
    out.verdict = Verdict::fail;
    out.exit_code = kExitConfig;
    out.summary = std::string("hypothesis violation: ") + e.what() + "\n";
    out.results = {{"error", e.what()}, {"kind", "hypothesis"}};
  } catch (const std::exception& e) {
    out = RunOutcome{};
    out.verdict = Verdict::fail;
    out.exit_code = kExitFail;
    out.summary = std::string("error: ") + e.what() + "\n";
    out.results = {{"error", e.what()}, {"kind", "runtime"}};
  }
  out.dir = dir;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Manifest m;
  m.config = to_json(cfg);
  m.config["output"]["dir"] = dir;
  m.outputs = out.outputs;
  m.results = out.results;
  m.exit_code = out.exit_code;
  m.status = out.exit_code == kExitConfig ? "error" : std::string(to_string(out.verdict));
  m.wall_seconds = out.wall_seconds;
  try {
    ensure_directory(dir);
    write_manifest(dir, m);
    out.outputs.push_back("manifest.json");
  } catch (const Error& e) {
    out.summary += std::string("could not write manifest: ") + e.what() + "\n";
  }
  return out;
}

std::vector<SweepEntry> load_sweep(const std::string& path) {
  const Json doc = load_json(path);
  if (!doc.is_object()) throw ConfigError("<root>", "sweep file must be an object");
  for (const auto& [k, v] : doc.items()) {
    if (k != "command" && k != "base" && k != "runs" && k != "description") throw ConfigError(k, "unknown key");
  }
  if (!doc.contains("command") || !doc["command"].is_string()) throw ConfigError("command", "required string");
  const auto command = parse_command(doc["command"].get<std::string>());
  if (!command) throw ConfigError("command", "unknown subcommand '" + doc["command"].get<std::string>() + "'");
  const Json base = doc.value("base", Json::object());
  if (!doc.contains("runs") || !doc["runs"].is_array() || doc["runs"].empty()) {
    throw ConfigError("runs", "expected a non-empty array");
  }
  const std::string dir = std::filesystem::path(path).parent_path().string();
  std::vector<SweepEntry> out;
  for (std::size_t i = 0; i < doc["runs"].size(); ++i) {
    const Json& r = doc["runs"][i];
    const std::string where = "runs[" + std::to_string(i) + "]";
    if (!r.is_object() || !r.contains("name") || !r["name"].is_string()) throw ConfigError(where + ".name", "required string");
    const std::string name = r["name"].get<std::string>();
    if (name.empty() || name.find('/') != std::string::npos || name == "." || name == "..") {
      throw ConfigError(where + ".name", "must be a plain directory name");
    }
    for (const auto& e : out) {
      if (e.name == name) throw ConfigError(where + ".name", "duplicate run name '" + name + "'");
    }
    Json merged = base;
    if (r.contains("set")) merged.merge_patch(r["set"]);
    try {
      out.push_back({name, parse_config(merged, *command, dir.empty() ? "." : dir)});
    } catch (const ConfigError& e) {
      throw ConfigError(where + "." + e.path(), std::string(e.what()).substr(e.path().size() + 2));
    }
  }
  return out;
}

std::vector<RunOutcome> run_sweep(const std::vector<SweepEntry>& entries, const std::string& dir, int jobs) {
  std::vector<RunOutcome> outcomes(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      outcomes[i] = execute(entries[i].config, (std::filesystem::path(dir) / entries[i].name).string());
      outcomes[i].name = entries[i].name;
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(n, entries.size()); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  ensure_directory(dir);
  Json runs = Json::array();
  for (const auto& o : outcomes) {
    runs.push_back({{"name", o.name}, {"status", std::string(to_string(o.verdict))}, {"exit_code", o.exit_code}, {"dir", o.dir}});
  }
  std::ofstream os((std::filesystem::path(dir) / "sweep.json").string());
  os << Json{{"runs", runs}, {"exit_code", sweep_exit_code(outcomes)}}.dump(2) << '\n';
  return outcomes;
}

int sweep_exit_code(const std::vector<RunOutcome>& outcomes) {
  bool fail = false, inconclusive = false;
  for (const auto& o : outcomes) {
    if (o.exit_code == kExitConfig) return kExitConfig;
    fail = fail || o.exit_code == kExitFail;
    inconclusive = inconclusive || o.exit_code == kExitInconclusive;
  }
  return fail ? kExitFail : inconclusive ? kExitInconclusive : kExitPass;
}

}  // namespace ide
