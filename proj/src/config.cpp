#include "ide/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>

#include "ide/errors.hpp"
#include "ide/properties.hpp"
#include "ide/spectral.hpp"

namespace ide {

namespace {

class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string at(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }
  bool has(std::string_view key) const { return j_.contains(std::string(key)); }
  const Json& raw(std::string_view key) const { return j_.at(std::string(key)); }

  Section child(std::string_view key) const {
    if (!has(key)) throw ConfigError(at(key), "required section is missing");
    return Section(raw(key), at(key));
  }

  double number(std::string_view key, double fallback) const {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(at(key), "must be finite");
    return x;
  }

  double positive(std::string_view key, double fallback) const {
    const double x = number(key, fallback);
    if (!(x > 0.0)) throw ConfigError(at(key), "must be positive");
    return x;
  }

  double nonnegative(std::string_view key, double fallback) const {
    const double x = number(key, fallback);
    if (!(x >= 0.0)) throw ConfigError(at(key), "must be nonnegative");
    return x;
  }

  std::optional<double> optional_number(std::string_view key) const {
    if (!has(key) || raw(key).is_null()) return std::nullopt;
    return number(key, 0.0);
  }

  long long integer(std::string_view key, long long fallback, long long min) const {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
    const auto x = v.get<long long>();
    if (x < min) throw ConfigError(at(key), "must be at least " + std::to_string(min));
    return x;
  }

  bool boolean(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!raw(key).is_boolean()) throw ConfigError(at(key), "expected true or false");
    return raw(key).get<bool>();
  }

  std::string string(std::string_view key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!raw(key).is_string()) throw ConfigError(at(key), "expected a string");
    return raw(key).get<std::string>();
  }

  std::string choice(std::string_view key, const std::string& fallback, std::initializer_list<std::string_view> options) const {
    const std::string s = string(key, fallback);
    for (auto o : options) {
      if (s == o) return s;
    }
    std::string list;
    for (auto o : options) list += (list.empty() ? "" : ", ") + std::string(o);
    throw ConfigError(at(key), "unknown value '" + s + "' (expected one of: " + list + ")");
  }

  std::vector<double> numbers(std::string_view key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_array()) throw ConfigError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<std::string> strings(std::string_view key) const {
    if (!has(key)) return {};
    const Json& v = raw(key);
    if (!v.is_array()) throw ConfigError(at(key), "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a string");
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, v] : j_.items()) {
      bool known = false;
      for (auto a : keys) known = known || k == a;
      if (!known) throw ConfigError(at(k), "unknown key");
    }
  }

 private:
  const Json& j_;
  std::string path_;
};

GridSpec parse_grid(const Section& s, GridSpec g) {
  s.allow_only({"x_min", "x_max", "n", "spacing"});
  g.x_min = s.number("x_min", g.x_min);
  g.x_max = s.number("x_max", g.x_max);
  if (!(g.x_max > g.x_min)) throw ConfigError(s.at("x_max"), "must exceed x_min");
  if (s.has("n") && s.has("spacing")) throw ConfigError(s.at("spacing"), "give either n or spacing, not both");
  if (s.has("spacing")) {
    g.n = SpatialGrid::with_spacing(g.x_min, g.x_max, s.positive("spacing", 1.0)).size();
  } else {
    g.n = static_cast<std::size_t>(s.integer("n", static_cast<long long>(g.n), 2));
  }
  return g;
}

KernelSpec parse_kernel(const Section& s) {
  KernelSpec k;
  k.type = s.choice("type", k.type, {"gaussian", "laplace", "table"});
  if (k.type == "gaussian") {
    s.allow_only({"type", "mean", "variance", "truncation_radius"});
    k.mean = s.number("mean", k.mean);
    k.variance = s.positive("variance", k.variance);
  } else if (k.type == "laplace") {
    s.allow_only({"type", "rate", "shift", "truncation_radius"});
    k.rate = s.positive("rate", k.rate);
    k.shift = s.number("shift", k.shift);
  } else {
    s.allow_only({"type", "path"});
    k.path = s.string("path", "");
    if (k.path.empty()) throw ConfigError(s.at("path"), "table kernels need a CSV path");
  }
  k.truncation_radius = s.nonnegative("truncation_radius", 0.0);
  return k;
}

HabitatSpec parse_habitat(const Section& s) {
  HabitatSpec h;
  h.type = s.choice("type", h.type, {"beverton_holt", "counterexample_g", "counterexample_h", "product"});
  if (h.type == "beverton_holt") {
    s.allow_only({"type", "r_minus", "r_plus", "K", "steepness", "center"});
    h.r_minus = s.positive("r_minus", h.r_minus);
    h.r_plus = s.positive("r_plus", h.r_plus);
    h.K = s.positive("K", h.K);
    h.steepness = s.positive("steepness", h.steepness);
    h.center = s.number("center", h.center);
  } else if (h.type == "product") {
    s.allow_only({"type", "coefficient", "nonlinearity", "k", "caps"});
    const Section c = s.child("coefficient");
    c.allow_only({"constant", "path"});
    if (c.has("constant") == c.has("path")) throw ConfigError(c.at("constant"), "give exactly one of constant or path");
    if (c.has("constant")) h.coefficient = c.nonnegative("constant", 0.0);
    h.coefficient_path = c.string("path", "");
    h.nonlinearity = s.choice("nonlinearity", h.nonlinearity, {"linear", "plateau", "ricker", "beverton_holt"});
    h.k = s.positive("k", h.k);
    h.caps = s.numbers("caps", {});
    for (std::size_t i = 0; i < h.caps.size(); ++i) {
      if (!(h.caps[i] > 0.0) || (i > 0 && !(h.caps[i] > h.caps[i - 1]))) {
        throw ConfigError(s.at("caps"), "caps must be positive and strictly increasing");
      }
    }
  } else {
    s.allow_only({"type", "beta", "margin"});
    if (s.has("beta") && s.raw("beta").is_string()) {
      if (s.string("beta", "") != "auto") throw ConfigError(s.at("beta"), "expected a number or \"auto\"");
    } else if (s.has("beta")) {
      h.beta = s.positive("beta", 1.0);
    }
    h.margin = s.positive("margin", h.margin);
  }
  return h;
}

InitialSpec parse_initial(const Section& s) {
  InitialSpec i;
  i.shape = s.choice("shape", i.shape, {"bump", "step", "constant", "csv"});
  if (i.shape == "bump") {
    s.allow_only({"shape", "center", "width", "height"});
    i.center = s.number("center", i.center);
    i.width = s.positive("width", i.width);
    i.height = s.nonnegative("height", i.height);
  } else if (i.shape == "step") {
    s.allow_only({"shape", "at", "side", "height"});
    i.at = s.number("at", i.at);
    i.side = s.choice("side", i.side, {"left", "right"});
    i.height = s.nonnegative("height", i.height);
  } else if (i.shape == "constant") {
    s.allow_only({"shape", "value"});
    i.value = s.nonnegative("value", i.value);
  } else {
    s.allow_only({"shape", "path"});
    i.path = s.string("path", "");
    if (i.path.empty()) throw ConfigError(s.at("path"), "csv initial data need a path");
  }
  return i;
}

Json grid_json(const GridSpec& g) { return Json{{"x_min", g.x_min}, {"x_max", g.x_max}, {"n", g.n}}; }

Json initial_json(const InitialSpec& i) {
  Json j{{"shape", i.shape}};
  if (i.shape == "bump") {
    j["center"] = i.center;
    j["width"] = i.width;
    j["height"] = i.height;
  } else if (i.shape == "step") {
    j["at"] = i.at;
    j["side"] = i.side;
    j["height"] = i.height;
  } else if (i.shape == "constant") {
    j["value"] = i.value;
  } else {
    j["path"] = i.path;
  }
  return j;
}

bool needs_model(Command c) { return c == Command::speed || c == Command::simulate || c == Command::fixed_point; }

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "speed") return Command::speed;
  if (name == "simulate") return Command::simulate;
  if (name == "fixed-point" || name == "fixed_point") return Command::fixed_point;
  if (name == "counterexample") return Command::counterexample;
  if (name == "check") return Command::check;
  return std::nullopt;
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::speed: return "speed";
    case Command::simulate: return "simulate";
    case Command::fixed_point: return "fixed-point";
    case Command::counterexample: return "counterexample";
    case Command::check: return "check";
  }
  return "?";
}

RunConfig parse_config(const Json& doc, Command command, const std::string& base_dir) {
  const Section root(doc, "");
  root.allow_only({"name", "description", "grid", "kernel", "habitat", "initial", "simulate", "diagnostics", "fixed_point",
                   "speed", "counterexample", "check", "output", "command"});
  if (root.has("command") && parse_command(root.string("command", "")) != command) {
    throw ConfigError("command", "config was written for '" + root.string("command", "") + "', not '" +
                                     std::string(to_string(command)) + "'");
  }
  RunConfig cfg;
  cfg.command = command;
  cfg.base_dir = base_dir;

  if (needs_model(command)) {
    cfg.kernel = parse_kernel(root.child("kernel"));
    cfg.habitat = parse_habitat(root.child("habitat"));
  }
  if (command == Command::simulate || command == Command::fixed_point) {
    cfg.grid = parse_grid(root.child("grid"), cfg.grid);
  }
  if (command == Command::simulate) cfg.initial = parse_initial(root.child("initial"));

  if (root.has("simulate")) {
    const Section s = root.child("simulate");
    s.allow_only({"steps", "snapshot_every"});
    cfg.simulate.steps = static_cast<int>(s.integer("steps", cfg.simulate.steps, 1));
    cfg.simulate.snapshot_every = static_cast<int>(s.integer("snapshot_every", cfg.simulate.snapshot_every, 1));
  }
  if (root.has("diagnostics")) {
    const Section s = root.child("diagnostics");
    s.allow_only({"epsilon", "levels", "tolerance", "left_tolerance", "tail_fraction", "burn_in", "upward", "annihilation",
                  "attractivity"});
    auto& d = cfg.diagnostics;
    d.epsilon = s.positive("epsilon", d.epsilon);
    d.levels = s.numbers("levels", d.levels);
    if (d.levels.empty()) throw ConfigError(s.at("levels"), "at least one level is required");
    for (double l : d.levels) {
      if (!(l > 0.0)) throw ConfigError(s.at("levels"), "levels must be positive");
    }
    d.tolerance = s.positive("tolerance", d.tolerance);
    d.left_tolerance = s.positive("left_tolerance", d.left_tolerance);
    d.tail_fraction = s.positive("tail_fraction", d.tail_fraction);
    if (d.tail_fraction > 1.0) throw ConfigError(s.at("tail_fraction"), "must not exceed 1");
    d.burn_in = static_cast<int>(s.integer("burn_in", d.burn_in, 0));
    d.upward = s.boolean("upward", d.upward);
    d.annihilation = s.boolean("annihilation", d.annihilation);
    if (s.has("attractivity")) {
      const Section a = s.child("attractivity");
      a.allow_only({"initial", "epsilon"});
      d.attractivity = parse_initial(a.child("initial"));
      d.attractivity_epsilon = a.positive("epsilon", d.attractivity_epsilon);
    }
  }
  if (root.has("fixed_point")) {
    const Section s = root.child("fixed_point");
    s.allow_only({"tol", "max_iters", "cap", "certificate", "gamma", "epsilon"});
    auto& f = cfg.fixed_point;
    f.tol = s.positive("tol", f.tol);
    f.max_iters = static_cast<int>(s.integer("max_iters", f.max_iters, 1));
    f.cap = s.optional_number("cap");
    if (f.cap && !(*f.cap > 0.0)) throw ConfigError(s.at("cap"), "must be positive");
    f.certificate = s.boolean("certificate", f.certificate);
    f.gamma = s.positive("gamma", f.gamma);
    f.epsilon = s.positive("epsilon", f.epsilon);
  }
  if (root.has("speed")) {
    const Section s = root.child("speed");
    s.allow_only({"mu_lo", "mu_hi", "mu_tol", "path", "quadrature_step", "curve_points"});
    auto& o = cfg.speed.options;
    o.mu_lo = s.positive("mu_lo", o.mu_lo);
    o.mu_hi = s.positive("mu_hi", o.mu_hi);
    if (!(o.mu_hi > o.mu_lo)) throw ConfigError(s.at("mu_hi"), "must exceed mu_lo");
    o.mu_tol = s.positive("mu_tol", o.mu_tol);
    o.path = s.choice("path", "analytic", {"analytic", "quadrature"}) == "analytic" ? MgfPath::analytic : MgfPath::quadrature;
    o.quadrature_step = s.positive("quadrature_step", o.quadrature_step);
    cfg.speed.curve_points = static_cast<int>(s.integer("curve_points", cfg.speed.curve_points, 2));
  }
  if (root.has("counterexample")) {
    const Section s = root.child("counterexample");
    s.allow_only({"margin", "grid"});
    cfg.counterexample.margin = s.positive("margin", cfg.counterexample.margin);
    if (s.has("grid")) cfg.counterexample.grid = parse_grid(s.child("grid"), cfg.counterexample.grid);
  }
  if (root.has("check")) {
    const Section s = root.child("check");
    s.allow_only({"seed", "modules"});
    cfg.check.seed = static_cast<std::uint64_t>(s.integer("seed", static_cast<long long>(cfg.check.seed), 0));
    cfg.check.modules = s.strings("modules");
  }
  if (root.has("output")) {
    const Section s = root.child("output");
    s.allow_only({"dir", "svg"});
    cfg.output.dir = s.string("dir", cfg.output.dir);
    if (cfg.output.dir.empty()) throw ConfigError(s.at("dir"), "must not be empty");
    cfg.output.svg = s.boolean("svg", cfg.output.svg);
  }
  return cfg;
}

Json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path, "cannot open config file");
  try {
    return Json::parse(is, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path, std::string("malformed JSON: ") + e.what());
  }
}

RunConfig load_config(const std::string& path, Command command) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_config(load_json(path), command, dir.empty() ? "." : dir);
}

Json to_json(const RunConfig& cfg) {
  Json j;
  j["command"] = std::string(to_string(cfg.command));
  if (needs_model(cfg.command)) {
    const auto& k = cfg.kernel;
    Json kj{{"type", k.type}};
    if (k.type == "gaussian") {
      kj["mean"] = k.mean;
      kj["variance"] = k.variance;
    } else if (k.type == "laplace") {
      kj["rate"] = k.rate;
      kj["shift"] = k.shift;
    } else {
      kj["path"] = k.path;
    }
    if (k.type != "table") kj["truncation_radius"] = k.truncation_radius;
    j["kernel"] = kj;

    const auto& h = cfg.habitat;
    Json hj{{"type", h.type}};
    if (h.type == "beverton_holt") {
      hj["r_minus"] = h.r_minus;
      hj["r_plus"] = h.r_plus;
      hj["K"] = h.K;
      hj["steepness"] = h.steepness;
      hj["center"] = h.center;
    } else if (h.type == "product") {
      hj["coefficient"] = h.coefficient ? Json{{"constant", *h.coefficient}} : Json{{"path", h.coefficient_path}};
      hj["nonlinearity"] = h.nonlinearity;
      hj["k"] = h.k;
      hj["caps"] = h.caps;
    } else {
      hj["beta"] = h.beta ? Json(*h.beta) : Json("auto");
      hj["margin"] = h.margin;
    }
    j["habitat"] = hj;
  }
  if (cfg.command == Command::simulate || cfg.command == Command::fixed_point) j["grid"] = grid_json(cfg.grid);
  if (cfg.command == Command::simulate) {
    j["initial"] = initial_json(cfg.initial);
    j["simulate"] = {{"steps", cfg.simulate.steps}, {"snapshot_every", cfg.simulate.snapshot_every}};
    const auto& d = cfg.diagnostics;
    Json dj{{"epsilon", d.epsilon},
            {"levels", d.levels},
            {"tolerance", d.tolerance},
            {"left_tolerance", d.left_tolerance},
            {"tail_fraction", d.tail_fraction},
            {"burn_in", d.burn_in},
            {"upward", d.upward},
            {"annihilation", d.annihilation}};
    if (d.attractivity) dj["attractivity"] = {{"initial", initial_json(*d.attractivity)}, {"epsilon", d.attractivity_epsilon}};
    j["diagnostics"] = dj;
  }
  if (cfg.command == Command::simulate || cfg.command == Command::fixed_point) {
    const auto& f = cfg.fixed_point;
    j["fixed_point"] = {{"tol", f.tol},
                        {"max_iters", f.max_iters},
                        {"cap", f.cap ? Json(*f.cap) : Json(nullptr)},
                        {"certificate", f.certificate},
                        {"gamma", f.gamma},
                        {"epsilon", f.epsilon}};
  }
  const auto& o = cfg.speed.options;
  j["speed"] = {{"mu_lo", o.mu_lo},
                {"mu_hi", o.mu_hi},
                {"mu_tol", o.mu_tol},
                {"path", o.path == MgfPath::analytic ? "analytic" : "quadrature"},
                {"quadrature_step", o.quadrature_step},
                {"curve_points", cfg.speed.curve_points}};
  j["counterexample"] = {{"margin", cfg.counterexample.margin}, {"grid", grid_json(cfg.counterexample.grid)}};
  if (cfg.command == Command::check) j["check"] = {{"seed", cfg.check.seed}, {"modules", cfg.check.modules}};
  j["output"] = {{"dir", cfg.output.dir}, {"svg", cfg.output.svg}};
  return j;
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

SpatialGrid build_grid(const GridSpec& spec) { return SpatialGrid(spec.x_min, spec.x_max, spec.n); }

Kernel build_kernel(const RunConfig& cfg) {
  const auto& k = cfg.kernel;
  try {
    if (k.type == "gaussian") return Kernel::gaussian(k.mean, k.variance, k.truncation_radius);
    if (k.type == "laplace") return Kernel::laplace(k.rate, k.shift, k.truncation_radius);
    return Kernel::from_csv(resolve_path(cfg.base_dir, k.path));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("kernel", e.what());
  }
}

Habitat build_habitat(const RunConfig& cfg) {
  const auto& h = cfg.habitat;
  try {
    if (h.type == "beverton_holt") return beverton_holt(h.r_minus, h.r_plus, h.K, h.steepness, h.center);
    if (h.type == "product") {
      const Coefficient coef = h.coefficient
                                   ? constant_coefficient(*h.coefficient)
                                   : tabulated_coefficient(read_field_csv(resolve_path(cfg.base_dir, h.coefficient_path)));
      return product_habitat("product", coef, *parse_nonlinearity(h.nonlinearity), h.k, h.caps);
    }
    const double beta =
        h.beta ? *h.beta : find_beta0(build_kernel(cfg), build_grid(cfg.counterexample.grid), h.margin);
    return h.type == "counterexample_g" ? counterexample_g(beta) : counterexample_h(beta);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("habitat", e.what());
  }
}

Field build_initial(const InitialSpec& spec, const SpatialGrid& grid, const std::string& base_dir,
                    const std::string& path) {
  try {
    if (spec.shape == "bump") return fixtures::bump(grid, spec.center, spec.width, spec.height);
    if (spec.shape == "step") {
      const bool left = spec.side == "left";
      return sample(grid, [&](double x) { return (left ? x <= spec.at : x >= spec.at) ? spec.height : 0.0; });
    }
    if (spec.shape == "constant") return Field::constant(grid, spec.value);
    const XYColumns cols = read_xy_csv(resolve_path(base_dir, spec.path));
    if (cols.x.size() < 2) throw InvalidArgument("initial CSV needs at least two rows");
    if (!std::is_sorted(cols.x.begin(), cols.x.end())) throw InvalidArgument("initial CSV x column must be sorted");
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x = grid.x(static_cast<std::ptrdiff_t>(i));
      auto it = std::lower_bound(cols.x.begin(), cols.x.end(), x);
      if (it == cols.x.begin()) {
        v[i] = cols.y.front();
      } else if (it == cols.x.end()) {
        v[i] = cols.y.back();
      } else {
        const auto j = static_cast<std::size_t>(it - cols.x.begin());
        const double t = (x - cols.x[j - 1]) / (cols.x[j] - cols.x[j - 1]);
        v[i] = (1.0 - t) * cols.y[j - 1] + t * cols.y[j];
      }
      if (v[i] < 0.0) throw InvalidArgument("initial data must be nonnegative");
    }
    return Field(grid, std::move(v));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace ide
