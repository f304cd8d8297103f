#include "bsq/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bsq/error.hpp"

namespace bsq::config {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be rejected.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_.contains(key); }

  double num(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(join(path_, key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(join(path_, key), "must be finite");
    return x;
  }
  double num(const std::string& key, double def) { return has(key) ? num(key) : def; }

  int integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
    return v.get<int>();
  }
  int integer(const std::string& key, int def) { return has(key) ? integer(key) : def; }

  std::uint64_t uint64(const std::string& key, std::uint64_t def) {
    if (!has(key)) return def;
    const json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError(join(path_, key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string str(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(join(path_, key), "expected a string");
    return v.get<std::string>();
  }
  std::string str(const std::string& key, const std::string& def) { return has(key) ? str(key) : def; }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
    return v.get<bool>();
  }

  Reader object(const std::string& key) { return Reader(at(key), join(path_, key)); }

  const json& raw(const std::string& key) { return at(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
    }
  }

 private:
  const json& at(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(join(path_, key), "missing required key");
    used_.insert(key);
    return j_.at(key);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

Grid parse_grid(Reader r) {
  Grid g;
  g.nx = r.integer("nx");
  g.ny = r.integer("ny");
  g.dx = r.num("dx");
  g.dy = r.num("dy", g.dx);
  g.x0 = r.num("x0", 0.0);
  g.y0 = r.num("y0", 0.0);
  r.finish();
  require(g.nx >= 5, join(r.path(), "nx"), "need at least 5 cells");
  require(g.ny >= 5, join(r.path(), "ny"), "need at least 5 cells");
  require(g.dx > 0.0, join(r.path(), "dx"), "must be positive");
  require(g.dy > 0.0, join(r.path(), "dy"), "must be positive");
  return g;
}

PhysParams parse_physics(Reader r) {
  PhysParams p;
  p.g = r.num("g", p.g);
  p.B = r.num("B_disp", p.B);
  p.c_f = r.num("c_f", p.c_f);
  p.h_eps = r.num("h_eps", p.h_eps);
  p.h_dry = r.num("h_dry", p.h_dry);
  r.finish();
  require(p.g > 0.0, join(r.path(), "g"), "must be positive");
  require(p.c_f >= 0.0, join(r.path(), "c_f"), "must be >= 0");
  require(p.h_eps >= 0.0, join(r.path(), "h_eps"), "must be >= 0");
  require(p.h_dry >= 0.0, join(r.path(), "h_dry"), "must be >= 0");
  return p;
}

void parse_numerics(Reader r, stepper::StepperConfig& s, std::vector<std::string>& warnings) {
  auto& n = s.numerics;
  auto& t = s.time;
  n.theta = r.num("theta", n.theta);
  n.cfl_target = r.num("cfl_target", n.cfl_target);
  t.alpha = r.num("alpha", t.alpha);
  t.dt_init = r.num("dt_init", t.dt_init);
  t.dt_min = r.num("dt_min", t.dt_min);
  t.dt_max = r.num("dt_max", t.dt_max);

  const std::string mode = r.str("mode", "adaptive");
  if (mode == "adaptive") {
    t.mode = stepper::Mode::Adaptive;
  } else if (mode == "fixed") {
    t.mode = stepper::Mode::Fixed;
  } else {
    throw ConfigError(join(r.path(), "mode"), "expected \"adaptive\" or \"fixed\", got \"" + mode + "\"");
  }

  const std::string solver = r.str("tridiag_solver", "thomas");
  if (solver == "thomas") {
    s.solver = implicit::Solver::Thomas;
  } else if (solver == "cr") {
    s.solver = implicit::Solver::CyclicReduction;
  } else {
    throw ConfigError(join(r.path(), "tridiag_solver"), "expected \"thomas\" or \"cr\", got \"" + solver + "\"");
  }

  const std::string policy = r.str("ratio_policy", "clamp");
  if (policy == "clamp") {
    t.guard.policy = multistep::RatioPolicy::Clamp;
  } else if (policy == "reject") {
    t.guard.policy = multistep::RatioPolicy::Reject;
  } else {
    throw ConfigError(join(r.path(), "ratio_policy"), "expected \"clamp\" or \"reject\"");
  }
  s.refine_cross_terms = r.boolean("refine_cross_terms", s.refine_cross_terms);
  s.blowup_factor = r.num("blowup_factor", s.blowup_factor);
  s.blowup_offset = r.num("blowup_offset", s.blowup_offset);
  r.finish();

  require(n.theta >= 1.0 && n.theta <= 2.0, join(r.path(), "theta"), "must lie in [1, 2]");
  require(n.cfl_target > 0.0, join(r.path(), "cfl_target"), "must be positive");
  require(n.cfl_target < 0.25, join(r.path(), "cfl_target"),
          "must be below 0.25, the stability limit of the central-upwind scheme");
  require(t.alpha > 0.0 && t.alpha <= 1.0, join(r.path(), "alpha"), "must lie in (0, 1]");
  if (t.alpha < 0.01 || t.alpha > 0.5) {
    warnings.push_back(join(r.path(), "alpha") + " = " + std::to_string(t.alpha) +
                       " is outside the recommended range [0.01, 0.5]");
  }
  require(t.dt_init > 0.0, join(r.path(), "dt_init"), "must be positive");
  require(t.dt_min > 0.0, join(r.path(), "dt_min"), "must be positive");
  require(t.dt_min <= t.dt_init, join(r.path(), "dt_min"), "must not exceed dt_init");
  require(t.dt_max <= 0.0 || t.dt_max >= t.dt_init, join(r.path(), "dt_max"), "must be >= dt_init");
  require(s.blowup_factor > 0.0, join(r.path(), "blowup_factor"), "must be positive");
  require(s.blowup_offset >= 0.0, join(r.path(), "blowup_offset"), "must be >= 0");
}

SideConfig parse_side(Reader r, std::uint64_t seed) {
  const std::string type = r.str("type");
  SideConfig out;
  if (type == "wall") {
    out = boundary::Wall{};
  } else if (type == "sponge") {
    boundary::Sponge sp;
    sp.width = r.num("width");
    sp.lambda_max = r.num("lambda_max", 10.0);
    require(sp.width > 0.0, join(r.path(), "width"), "must be positive");
    require(sp.lambda_max >= 0.0, join(r.path(), "lambda_max"), "must be >= 0");
    out = sp;
  } else if (type == "sine") {
    SineParams p;
    p.amplitude = r.num("amplitude");
    p.period = r.num("period");
    p.phase = r.num("phase", 0.0);
    p.ramp = r.num("ramp", 0.0);
    require(p.period > 0.0, join(r.path(), "period"), "must be positive");
    require(p.ramp >= 0.0, join(r.path(), "ramp"), "must be >= 0");
    out = p;
  } else if (type == "irregular") {
    IrregularParams p;
    auto& sp = p.spectrum;
    sp.Hs = r.num("Hs");
    sp.Tp = r.num("Tp");
    sp.gamma = r.num("gamma", 3.3);
    sp.n_components = r.integer("n_components", 64);
    sp.df = r.num("df", 0.0);
    sp.seed = r.uint64("seed", seed);
    p.ramp = r.num("ramp", 0.0);
    require(sp.Hs > 0.0, join(r.path(), "Hs"), "must be positive");
    require(sp.Tp > 0.0, join(r.path(), "Tp"), "must be positive");
    require(sp.gamma >= 1.0, join(r.path(), "gamma"), "must be >= 1");
    require(sp.n_components >= 1, join(r.path(), "n_components"), "must be >= 1");
    // Default spacing spans 0.5 fp .. 1.5 fp.
    if (sp.df <= 0.0) sp.df = 1.0 / (sp.Tp * sp.n_components);
    require(p.ramp >= 0.0, join(r.path(), "ramp"), "must be >= 0");
    out = p;
  } else {
    throw ConfigError(join(r.path(), "type"),
                      "expected one of \"wall\", \"sponge\", \"sine\", \"irregular\", got \"" + type + "\"");
  }
  r.finish();
  return out;
}

void parse_boundaries(Reader r, RunConfig& cfg) {
  const char* names[] = {"west", "east", "south", "north"};
  for (int k = 0; k < 4; ++k) {
    if (r.has(names[k])) cfg.boundaries[k] = parse_side(r.object(names[k]), cfg.seed);
  }
  r.finish();
}

void parse_initial(Reader r, ScenarioConfig& sc) {
  const std::string type = r.str("type", "still");
  if (type == "still") {
    sc.initial = InitialKind::Still;
  } else if (type == "solitary") {
    sc.initial = InitialKind::Solitary;
    auto& s = sc.solitary;
    s.H = r.num("H");
    s.d0 = r.num("d0");
    s.x0 = r.num("x0");
    s.breaking_ratio = r.num("breaking_ratio", s.breaking_ratio);
    const std::string dir = r.str("direction", "+x");
    if (dir == "+x") {
      s.direction = 1;
    } else if (dir == "-x") {
      s.direction = -1;
    } else {
      throw ConfigError(join(r.path(), "direction"), "expected \"+x\" or \"-x\"");
    }
    require(s.d0 > 0.0, join(r.path(), "d0"), "must be positive");
    require(s.H > 0.0, join(r.path(), "H"), "must be positive");
    require(s.H < s.breaking_ratio * s.d0, join(r.path(), "H"),
            "exceeds the breaking limit " + std::to_string(s.breaking_ratio) + " * d0");
  } else if (type == "dam_break") {
    sc.initial = InitialKind::DamBreak;
    sc.dam.x = r.num("x");
    sc.dam.w_left = r.num("w_left");
  } else {
    throw ConfigError(join(r.path(), "type"), "expected \"still\", \"solitary\" or \"dam_break\"");
  }
  r.finish();
}

void parse_scenario(Reader r, ScenarioConfig& sc, const std::filesystem::path& base_dir) {
  const std::string type = r.str("bathymetry");
  if (type == "conical_island") {
    sc.bathymetry = BathyKind::ConicalIsland;
    auto& c = sc.island;
    c.base_diameter = r.num("base_diameter", c.base_diameter);
    c.slope = r.num("slope", c.slope);
    c.crest_height = r.num("crest_height", c.crest_height);
    c.depth = r.num("depth", c.depth);
    c.cx = r.num("cx", c.cx);
    c.cy = r.num("cy", c.cy);
    require(c.base_diameter > 0.0, join(r.path(), "base_diameter"), "must be positive");
    require(c.slope > 0.0, join(r.path(), "slope"), "must be positive");
    require(c.crest_height > 0.0, join(r.path(), "crest_height"), "must be positive");
    require(c.depth > 0.0, join(r.path(), "depth"), "must be positive");
  } else if (type == "hamm") {
    sc.bathymetry = BathyKind::Hamm;
  } else if (type == "gaussian_hump") {
    sc.bathymetry = BathyKind::GaussianHump;
    auto& h = sc.hump;
    h.depth = r.num("depth");
    h.height = r.num("height");
    h.width = r.num("width");
    h.cx = r.num("cx");
    h.cy = r.num("cy");
    require(h.depth > 0.0, join(r.path(), "depth"), "must be positive");
    require(h.width > 0.0, join(r.path(), "width"), "must be positive");
  } else if (type == "flat") {
    sc.bathymetry = BathyKind::Flat;
    sc.flat_depth = r.num("depth");
    require(sc.flat_depth > 0.0, join(r.path(), "depth"), "must be positive");
  } else if (type == "file") {
    sc.bathymetry = BathyKind::File;
    sc.file.path = r.str("path");
    if (sc.file.path.is_relative()) sc.file.path = base_dir / sc.file.path;
    sc.file.ws = r.num("ws", 0.0);
    if (!std::filesystem::exists(sc.file.path)) {
      throw ConfigError(join(r.path(), "path"), "file not found: " + sc.file.path.string());
    }
  } else {
    throw ConfigError(join(r.path(), "bathymetry"),
                      "expected one of \"conical_island\", \"hamm\", \"gaussian_hump\", \"flat\", \"file\"");
  }
  if (r.has("initial")) parse_initial(r.object("initial"), sc);
  r.finish();
}

std::vector<scenario::GaugeSpec> parse_gauges(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw ConfigError(path, "expected an array");
  std::vector<scenario::GaugeSpec> out;
  std::set<std::string> ids;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    Reader r(arr[k], path + "[" + std::to_string(k) + "]");
    scenario::GaugeSpec g;
    g.id = r.str("id");
    g.x = r.num("x");
    g.y = r.num("y");
    g.record_interval = r.num("record_interval", 0.0);
    r.finish();
    require(!g.id.empty() && g.id.find_first_of("/\\") == std::string::npos, join(r.path(), "id"),
            "must be a non-empty file-name-safe label");
    require(ids.insert(g.id).second, join(r.path(), "id"), "duplicate gauge id '" + g.id + "'");
    require(g.record_interval >= 0.0, join(r.path(), "record_interval"), "must be >= 0");
    out.push_back(g);
  }
  return out;
}

OutputConfig parse_outputs(Reader r) {
  OutputConfig o;
  o.directory = r.str("directory", "output");
  o.snapshot_interval = r.num("snapshot_interval", 0.0);
  require(o.snapshot_interval >= 0.0, join(r.path(), "snapshot_interval"), "must be >= 0");
  if (r.has("fields")) {
    const json& f = r.raw("fields");
    const std::string fp = join(r.path(), "fields");
    if (!f.is_array()) throw ConfigError(fp, "expected an array");
    o.fields.clear();
    for (std::size_t k = 0; k < f.size(); ++k) {
      const std::string item = fp + "[" + std::to_string(k) + "]";
      if (!f[k].is_string()) throw ConfigError(item, "expected a string");
      const std::string name = f[k].get<std::string>();
      if (name != "w" && name != "P" && name != "Q" && name != "max_w") {
        throw ConfigError(item, "unknown field \"" + name + "\" (expected w, P, Q or max_w)");
      }
      o.fields.push_back(name);
    }
  }
  if (r.has("runup")) {
    Reader rr = r.object("runup");
    RunupConfig ru;
    ru.spec.s = rr.num("s", ru.spec.s);
    ru.spec.delta = rr.num("delta", 0.0);
    ru.spec.cx = rr.num("cx");
    ru.spec.cy = rr.num("cy");
    ru.n_azimuths = rr.integer("n_azimuths", ru.n_azimuths);
    ru.reference_radius = rr.num("reference_radius", 0.0);
    rr.finish();
    require(ru.spec.s > 0.0, join(rr.path(), "s"), "must be positive");
    require(ru.spec.delta >= 0.0, join(rr.path(), "delta"), "must be >= 0");
    require(ru.n_azimuths >= 1, join(rr.path(), "n_azimuths"), "must be >= 1");
    o.runup = ru;
  }
  if (r.has("averages")) {
    Reader ra = r.object("averages");
    AveragesConfig a;
    a.t0 = ra.num("t0");
    a.t1 = ra.num("t1");
    ra.finish();
    require(a.t1 > a.t0, join(ra.path(), "t1"), "must exceed t0");
    o.averages = a;
  }
  r.finish();
  return o;
}

}  // namespace

void validate(RunConfig& cfg) {
  require(cfg.duration > 0.0, "duration", "must be positive");
  auto& t = cfg.stepper.time;
  require(cfg.stepper.numerics.cfl_target > 0.0 && cfg.stepper.numerics.cfl_target < 0.25, "numerics.cfl_target",
          "must lie in (0, 0.25)");
  require(t.dt_init > 0.0, "numerics.dt_init", "must be positive");
  require(t.dt_min <= t.dt_init, "numerics.dt_min", "must not exceed dt_init");
  require(t.dt_max <= 0.0 || t.dt_max >= t.dt_init, "numerics.dt_max", "must be >= dt_init");
  const Grid& g = cfg.grid;
  for (std::size_t k = 0; k < cfg.gauges.size(); ++k) {
    const auto& ga = cfg.gauges[k];
    const bool inside = ga.x >= g.x0 && ga.x <= g.x0 + g.length_x() && ga.y >= g.y0 && ga.y <= g.y0 + g.length_y();
    require(inside, "gauges[" + std::to_string(k) + "]", "gauge '" + ga.id + "' lies outside the domain");
  }
  if (cfg.outputs.averages && cfg.outputs.averages->t1 > cfg.duration) {
    throw ConfigError("outputs.averages.t1", "window ends after the run duration");
  }
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  RunConfig cfg;
  Reader root(doc, "");
  cfg.seed = root.uint64("seed", 0);
  cfg.duration = root.num("duration");
  cfg.grid = parse_grid(root.object("grid"));
  if (root.has("physics")) cfg.stepper.phys = parse_physics(root.object("physics"));
  if (root.has("numerics")) parse_numerics(root.object("numerics"), cfg.stepper, cfg.warnings);
  if (root.has("boundaries")) parse_boundaries(root.object("boundaries"), cfg);
  parse_scenario(root.object("scenario"), cfg.scenario, base_dir);
  if (root.has("gauges")) cfg.gauges = parse_gauges(root.raw("gauges"), "gauges");
  if (root.has("outputs")) cfg.outputs = parse_outputs(root.object("outputs"));
  root.finish();
  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read configuration file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path());
}

}  // namespace bsq::config
