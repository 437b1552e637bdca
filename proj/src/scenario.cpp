#include "lqm/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lqm/calculus.hpp"
#include "lqm/variational.hpp"

namespace lqm {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

// Line of the last component of a dotted key path, found by searching for
// each quoted component in turn. 0 when not found.
std::size_t line_of(const std::string& text, const std::string& path) {
  std::size_t pos = 0;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    const std::string comp = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!comp.empty() && comp.front() != '[') {
      const std::size_t found = text.find("\"" + comp + "\"", pos);
      if (found == std::string::npos) return 0;
      pos = found;
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

class Section {
 public:
  Section(const json& obj, std::string path, const std::string& text)
      : obj_(obj), path_(std::move(path)), text_(text) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] void fail(const std::string& key_path, const std::string& msg) const {
    std::string where = key_path.empty() ? "scenario" : key_path;
    const std::size_t line = key_path.empty() ? 0 : line_of(text_, key_path);
    if (line > 0) where += " (line " + std::to_string(line) + ")";
    throw ConfigError(where + ": " + msg);
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return obj_.contains(key); }

  const json* raw(const std::string& key) {
    used_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = raw(key);
    if (!v) return require(key, fallback);
    if (!v->is_number()) fail(key_path(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) fail(key_path(key), "must be finite");
    return d;
  }

  std::uint64_t count(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) {
    const json* v = raw(key);
    if (!v) return require(key, fallback);
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer()) fail(key_path(key), "must be non-negative");
    fail(key_path(key), "expected a non-negative integer");
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const json* v = raw(key);
    if (!v) return require(key, fallback);
    if (!v->is_string()) fail(key_path(key), "expected a string");
    return v->get<std::string>();
  }

  bool flag(const std::string& key, bool fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(key_path(key), "expected true or false");
    return v->get<bool>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_array()) fail(key_path(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number()) fail(key_path(key), "expected an array of numbers");
      out.push_back(e.get<double>());
      if (!std::isfinite(out.back())) fail(key_path(key), "values must be finite");
    }
    return out;
  }

  std::optional<Section> child(const std::string& key) {
    const json* v = raw(key);
    if (!v || v->is_null()) return std::nullopt;
    return Section(*v, key_path(key), text_);
  }

  // Unknown keys are errors.
  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.count(it.key())) fail(key_path(it.key()), "unknown key '" + it.key() + "'");
    }
  }

  const std::string& path() const { return path_; }

 private:
  template <class T>
  T require(const std::string& key, const std::optional<T>& fallback) const {
    if (!fallback) fail(key_path(key), "required key is missing");
    return *fallback;
  }

  const json& obj_;
  std::string path_;
  const std::string& text_;
  std::set<std::string> used_;
};

PotentialSpec read_potential(Section s) {
  PotentialSpec p;
  p.kind = s.text("kind", "free");
  if (auto m = s.child("modulation")) {
    TimeModulation tm;
    tm.omega = m->number("omega", 1.0);
    tm.phase = m->number("phase", 0.0);
    m->finish();
    p.modulation = tm;
  }
  if (p.kind == "sampled") {
    p.values = s.numbers("values", {});
    if (!s.has("values")) s.fail(s.key_path("values"), "required for a sampled potential");
  } else {
    AnalyticKind kind;
    try {
      kind = analytic_kind_from_string(p.kind);
    } catch (const InvalidArgument&) {
      s.fail(s.key_path("kind"), "unknown potential kind '" + p.kind +
                                     "' (expected free, harmonic, box, quartic, linear, constant or sampled)");
    }
    for (const auto& [name, def] : analytic_defaults(kind)) p.params[name] = s.number(name, def);
  }
  s.finish();
  return p;
}

std::vector<double> default_initial_params(const std::string& family) {
  const TrialFamily f = trial_family_from_string(family);
  if (f.name == "gaussian") return {0.0, 1.0};
  if (f.name == "gaussian-phase") return {0.0, 1.0, 0.0};
  std::vector<double> p(f.parameter_names.size(), 0.0);
  p[0] = 1.0;
  return p;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n';
    throw ConfigError("line " + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  Section top(doc, "", text);
  Scenario s;

  const std::uint64_t version = top.count("spec_version");
  if (version != static_cast<std::uint64_t>(kSpecVersion)) {
    top.fail("spec_version", "unsupported version " + std::to_string(version) + " (expected 1)");
  }
  s.name = top.text("name");
  s.task = top.text("task");
  if (top.has("rng_seed") && !doc["rng_seed"].is_null()) s.rng_seed = top.count("rng_seed");
  else top.raw("rng_seed");

  if (auto g = top.child("grid")) {
    s.grid.x_min = g->number("x_min", s.grid.x_min);
    s.grid.x_max = g->number("x_max", s.grid.x_max);
    s.grid.n_points = g->count("n_points", s.grid.n_points);
    s.grid.boundary = g->text("boundary", s.grid.boundary);
    g->finish();
  }
  if (auto c = top.child("constants")) {
    s.constants.hbar = c->number("hbar", 1.0);
    s.constants.mass = c->number("mass", 1.0);
    s.constants.charge = c->number("charge", 1.0);
    c->finish();
  }
  if (auto p = top.child("potentials")) {
    if (auto v = p->child("v1")) s.v1 = read_potential(*v);
    if (auto v = p->child("a0")) s.a0 = read_potential(*v);
    if (auto v = p->child("a_vec")) s.a_vec = read_potential(*v);
    p->finish();
  }
  if (auto i = top.child("interaction")) {
    InteractionSpec spec;
    spec.kind = i->text("kind");
    if (spec.kind == "contact") {
      spec.g = i->number("g");
    } else if (spec.kind == "gaussian-kernel") {
      spec.strength = i->number("strength");
      spec.range = i->number("range", 1.0);
    } else {
      i->fail(i->key_path("kind"), "unknown interaction kind '" + spec.kind +
                                       "' (expected contact or gaussian-kernel)");
    }
    const std::uint64_t n = i->count("particle_count");
    if (n > 1000000000ULL) i->fail(i->key_path("particle_count"), "too large");
    spec.particle_count = static_cast<int>(n);
    i->finish();
    s.interaction = spec;
  }
  if (auto i = top.child("initial_state")) {
    auto& st = s.initial_state;
    st.kind = i->text("kind", "gaussian");
    if (st.kind == "gaussian" || st.kind == "ground-state") {
      st.center = i->number("center", st.center);
      st.width = i->number("width", st.width);
      if (st.kind == "gaussian") st.wavenumber = i->number("wavenumber", st.wavenumber);
    } else if (st.kind == "random") {
      const std::uint64_t c = i->count("components", 4);
      if (c > 1000) i->fail(i->key_path("components"), "at most 1000 components");
      st.components = static_cast<int>(c);
    } else {
      i->fail(i->key_path("kind"), "unknown initial state '" + st.kind +
                                       "' (expected gaussian, random or ground-state)");
    }
    i->finish();
  }
  if (auto p = top.child("propagation")) {
    auto& ps = s.propagation;
    ps.dt = p->number("dt", ps.dt);
    ps.t_start = p->number("t_start", ps.t_start);
    ps.n_steps = p->count("n_steps", ps.n_steps);
    ps.scheme = p->text("scheme", ps.scheme);
    ps.nonlinear_update = p->text("nonlinear_update", "");
    p->finish();
  }
  if (s.propagation.nonlinear_update.empty()) {
    s.propagation.nonlinear_update = s.interaction ? "predictor-corrector" : "none";
  }
  if (auto g = top.child("ground_state")) {
    auto& gs = s.ground_state;
    gs.dtau = g->number("dtau", gs.dtau);
    gs.tol = g->number("tol", gs.tol);
    gs.max_iter = g->count("max_iter", gs.max_iter);
    g->finish();
  }
  if (auto r = top.child("rayleigh_ritz")) {
    auto& rr = s.rayleigh_ritz;
    rr.family = r->text("family", rr.family);
    rr.initial_params = r->numbers("initial_params", {});
    if (auto f = r->child("frozen")) {
      const json* obj = r->raw("frozen");
      for (auto it = obj->begin(); it != obj->end(); ++it) rr.frozen[it.key()] = f->number(it.key());
      f->finish();
    }
    rr.max_iter = r->count("max_iter", rr.max_iter);
    rr.tol = r->number("tol", rr.tol);
    r->finish();
  }
  if (s.rayleigh_ritz.initial_params.empty()) {
    try {
      s.rayleigh_ritz.initial_params = default_initial_params(s.rayleigh_ritz.family);
    } catch (const InvalidArgument& e) {
      top.fail("rayleigh_ritz.family", e.what());
    }
  }
  if (auto v = top.child("verify")) {
    auto& vs = s.verify;
    vs.norm_drift = v->number("norm_drift", vs.norm_drift);
    vs.energy_drift = v->number("energy_drift", vs.energy_drift);
    vs.continuity_sup = v->number("continuity_sup", vs.continuity_sup);
    vs.action_gap = v->number("action_gap", vs.action_gap);
    vs.reality = v->number("reality", vs.reality);
    vs.slope_tolerance = v->number("slope_tolerance", vs.slope_tolerance);
    vs.hamilton_symmetry = v->number("hamilton_symmetry", vs.hamilton_symmetry);
    vs.gauge = v->number("gauge", vs.gauge);
    vs.epsilons = v->numbers("epsilons", vs.epsilons);
    v->finish();
  }
  if (auto o = top.child("output")) {
    s.output.dir = o->text("dir", s.output.dir);
    s.output.record_stride = o->count("record_stride", s.output.record_stride);
    s.output.write_snapshots = o->flag("write_snapshots", s.output.write_snapshots);
    o->finish();
  }
  top.finish();

  try {
    validate_scenario(s);
  } catch (const ConfigError& e) {
    // Attach a line number when the message starts with a key path.
    const std::string msg = e.what();
    const std::size_t colon = msg.find(':');
    if (colon != std::string::npos && msg.find(' ') > colon) {
      const std::size_t line = line_of(text, msg.substr(0, colon));
      if (line > 0) {
        throw ConfigError(msg.substr(0, colon) + " (line " + std::to_string(line) + ")" + msg.substr(colon));
      }
    }
    throw;
  }
  return s;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace {

ordered_json potential_json(const PotentialSpec& p) {
  ordered_json j;
  j["kind"] = p.kind;
  if (p.kind == "sampled") {
    j["values"] = p.values;
  } else {
    for (const auto& [k, v] : p.params) j[k] = v;
  }
  if (p.modulation) j["modulation"] = {{"omega", p.modulation->omega}, {"phase", p.modulation->phase}};
  return j;
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  ordered_json j;
  j["spec_version"] = s.spec_version;
  j["name"] = s.name;
  j["task"] = s.task;
  j["rng_seed"] = s.rng_seed ? ordered_json(*s.rng_seed) : ordered_json(nullptr);
  j["grid"] = {{"x_min", s.grid.x_min},
               {"x_max", s.grid.x_max},
               {"n_points", s.grid.n_points},
               {"boundary", s.grid.boundary}};
  j["constants"] = {{"hbar", s.constants.hbar}, {"mass", s.constants.mass}, {"charge", s.constants.charge}};
  j["potentials"] = {{"v1", potential_json(s.v1)}, {"a0", potential_json(s.a0)}, {"a_vec", potential_json(s.a_vec)}};
  if (s.interaction) {
    ordered_json i;
    i["kind"] = s.interaction->kind;
    if (s.interaction->kind == "contact") {
      i["g"] = s.interaction->g;
    } else {
      i["strength"] = s.interaction->strength;
      i["range"] = s.interaction->range;
    }
    i["particle_count"] = s.interaction->particle_count;
    j["interaction"] = i;
  } else {
    j["interaction"] = nullptr;
  }
  {
    const auto& st = s.initial_state;
    ordered_json i;
    i["kind"] = st.kind;
    if (st.kind == "random") {
      i["components"] = st.components;
    } else {
      i["center"] = st.center;
      i["width"] = st.width;
      if (st.kind == "gaussian") i["wavenumber"] = st.wavenumber;
    }
    j["initial_state"] = i;
  }
  j["propagation"] = {{"dt", s.propagation.dt},
                      {"t_start", s.propagation.t_start},
                      {"n_steps", s.propagation.n_steps},
                      {"scheme", s.propagation.scheme},
                      {"nonlinear_update", s.propagation.nonlinear_update}};
  j["ground_state"] = {{"dtau", s.ground_state.dtau},
                       {"tol", s.ground_state.tol},
                       {"max_iter", s.ground_state.max_iter}};
  {
    ordered_json frozen = ordered_json::object();
    for (const auto& [k, v] : s.rayleigh_ritz.frozen) frozen[k] = v;
    j["rayleigh_ritz"] = {{"family", s.rayleigh_ritz.family},
                          {"initial_params", s.rayleigh_ritz.initial_params},
                          {"frozen", frozen},
                          {"max_iter", s.rayleigh_ritz.max_iter},
                          {"tol", s.rayleigh_ritz.tol}};
  }
  j["verify"] = {{"norm_drift", s.verify.norm_drift},
                 {"energy_drift", s.verify.energy_drift},
                 {"continuity_sup", s.verify.continuity_sup},
                 {"action_gap", s.verify.action_gap},
                 {"reality", s.verify.reality},
                 {"slope_tolerance", s.verify.slope_tolerance},
                 {"hamilton_symmetry", s.verify.hamilton_symmetry},
                 {"gauge", s.verify.gauge},
                 {"epsilons", s.verify.epsilons}};
  j["output"] = {{"dir", s.output.dir},
                 {"record_stride", s.output.record_stride},
                 {"write_snapshots", s.output.write_snapshots}};
  return j.dump(2) + "\n";
}

namespace {

void check(bool ok, const std::string& path, const std::string& msg) {
  if (!ok) throw ConfigError(path + ": " + msg);
}

template <class F>
void rethrow_as_config(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

void validate_scenario(const Scenario& s) {
  check(s.spec_version == kSpecVersion, "spec_version", "must be 1");
  check(!s.name.empty(), "name", "must not be empty");
  static const std::set<std::string> tasks{"propagate", "ground-state", "rayleigh-ritz", "gp-propagate",
                                           "verify"};
  check(tasks.count(s.task) > 0, "task",
        "unknown task '" + s.task + "' (expected propagate, ground-state, rayleigh-ritz, gp-propagate or verify)");

  check(s.grid.n_points >= Grid::kMinPoints, "grid.n_points",
        "must be >= 8 (got " + std::to_string(s.grid.n_points) + ")");
  check(s.grid.x_max > s.grid.x_min, "grid.x_max", "must exceed grid.x_min");
  rethrow_as_config("grid.boundary", [&] { boundary_from_string(s.grid.boundary); });
  rethrow_as_config("constants", [&] { s.constants.validate(); });

  const Grid grid = build_grid(s);
  for (const auto& [name, p] : {std::pair{"potentials.v1", &s.v1}, std::pair{"potentials.a0", &s.a0},
                                std::pair{"potentials.a_vec", &s.a_vec}}) {
    if (p->kind == "sampled") {
      check(p->values.size() == grid.n_points(), std::string(name) + ".values",
            "has " + std::to_string(p->values.size()) + " entries but the grid has " +
                std::to_string(grid.n_points()) + " points");
    }
  }
  if (s.interaction) {
    check(s.interaction->particle_count >= 1, "interaction.particle_count", "must be >= 1");
    if (s.interaction->kind == "gaussian-kernel") {
      check(s.interaction->range > 0.0, "interaction.range", "must be positive");
    }
  }
  HamiltonianConfig cfg;
  rethrow_as_config("potentials", [&] { cfg = build_hamiltonian(s, grid); });

  const auto& st = s.initial_state;
  check(st.width > 0.0, "initial_state.width", "must be positive");
  check(st.components >= 1, "initial_state.components", "must be >= 1");
  if (st.kind == "random") check(s.rng_seed.has_value(), "rng_seed", "required for a random initial state");

  check(s.ground_state.dtau > 0.0, "ground_state.dtau", "must be positive");
  check(s.ground_state.tol > 0.0, "ground_state.tol", "must be positive");
  check(s.ground_state.max_iter >= 1, "ground_state.max_iter", "must be >= 1");

  check(s.output.record_stride >= 1, "output.record_stride", "must be >= 1");
  check(!s.output.dir.empty(), "output.dir", "must not be empty");

  rethrow_as_config("propagation", [&] {
    scheme_from_string(s.propagation.scheme);
    nonlinear_update_from_string(s.propagation.nonlinear_update);
  });
  const bool propagating = s.task == "propagate" || s.task == "gp-propagate" || s.task == "verify";
  if (propagating) {
    rethrow_as_config("propagation", [&] { build_plan(s).validate(cfg); });
    if (s.propagation.scheme == "split-operator") {
      check(grid.periodic(), "propagation.scheme", "split-operator needs a periodic grid");
    }
  }
  if (s.task == "propagate") check(!s.interaction, "interaction", "use task gp-propagate with an interaction");
  if (s.task == "gp-propagate") check(s.interaction.has_value(), "interaction", "gp-propagate needs an interaction");
  if (s.task == "verify") {
    check(s.propagation.n_steps / s.output.record_stride >= 4, "propagation.n_steps",
          "verify needs at least 4 recorded steps (n_steps / record_stride >= 4)");
    const auto& v = s.verify;
    for (double t : {v.norm_drift, v.energy_drift, v.continuity_sup, v.action_gap, v.reality,
                     v.slope_tolerance, v.hamilton_symmetry, v.gauge}) {
      check(t > 0.0, "verify", "thresholds must be positive");
    }
    std::set<double> distinct;
    for (double e : v.epsilons) {
      if (e != 0.0) distinct.insert(std::abs(e));
    }
    check(distinct.size() >= 2, "verify.epsilons", "need at least two distinct nonzero values");
  }
  if (s.task == "rayleigh-ritz") {
    const auto& rr = s.rayleigh_ritz;
    TrialFamily family;
    rethrow_as_config("rayleigh_ritz.family", [&] { family = trial_family_from_string(rr.family); });
    check(rr.initial_params.size() == family.parameter_names.size(), "rayleigh_ritz.initial_params",
          "expected " + std::to_string(family.parameter_names.size()) + " values");
    for (const auto& [k, v] : rr.frozen) {
      rethrow_as_config("rayleigh_ritz.frozen", [&] { family = freeze_parameter(family, k, v); });
    }
    check(rr.max_iter >= 1, "rayleigh_ritz.max_iter", "must be >= 1");
    check(rr.tol > 0.0, "rayleigh_ritz.tol", "must be positive");
  }
}

Grid build_grid(const Scenario& s) {
  return make_grid(s.grid.x_min, s.grid.x_max, s.grid.n_points, boundary_from_string(s.grid.boundary));
}

namespace {

PotentialField build_potential(const PotentialSpec& p, const Grid& grid) {
  PotentialField f = p.kind == "sampled"
                         ? PotentialField::sampled(grid, Eigen::Map<const RealField>(p.values.data(),
                                                                                     static_cast<Eigen::Index>(p.values.size())))
                         : PotentialField::analytic(p.kind, p.params);
  return p.modulation ? f.modulated(*p.modulation) : f;
}

}  // namespace

HamiltonianConfig build_hamiltonian(const Scenario& s, const Grid& grid) {
  HamiltonianConfig cfg;
  cfg.constants = s.constants;
  cfg.v1 = build_potential(s.v1, grid);
  cfg.a0 = build_potential(s.a0, grid);
  cfg.a_vec = build_potential(s.a_vec, grid);
  if (s.interaction) {
    const auto& i = *s.interaction;
    if (i.kind == "contact") {
      cfg.interaction = TwoBodyInteraction::contact(i.g, i.particle_count);
    } else {
      const RealField x = grid.coordinates();
      const auto n = x.size();
      Eigen::MatrixXd v2(n, n);
      for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
          const double d = x[a] - x[b];
          v2(a, b) = i.strength * std::exp(-d * d / (2.0 * i.range * i.range));
        }
      }
      cfg.interaction = TwoBodyInteraction::kernel(std::move(v2), i.particle_count);
    }
  }
  return cfg;
}

PropagationPlan build_plan(const Scenario& s) {
  PropagationPlan p;
  p.dt = s.propagation.dt;
  p.t_start = s.propagation.t_start;
  p.n_steps = s.propagation.n_steps;
  p.scheme = scheme_from_string(s.propagation.scheme);
  p.nonlinear_update = nonlinear_update_from_string(s.propagation.nonlinear_update);
  p.record_stride = s.output.record_stride;
  return p;
}

Wavefunction build_initial_state(const Scenario& s, const Grid& grid, const HamiltonianConfig& cfg,
                                 bool* relaxed_converged) {
  const auto& st = s.initial_state;
  const double t0 = s.propagation.t_start;
  auto gaussian = [&](double k) {
    const double inv = 1.0 / (4.0 * st.width * st.width);
    return Wavefunction::sample(
        grid, [&](double x) { return std::polar(std::exp(-(x - st.center) * (x - st.center) * inv), k * x); }, t0);
  };
  if (relaxed_converged) *relaxed_converged = true;
  if (st.kind == "gaussian") return normalize(gaussian(st.wavenumber));
  if (st.kind == "random") {
    std::mt19937_64 gen(*s.rng_seed);
    auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    const double length = grid.length();
    struct Bump {
      double center, width, amplitude, phase, k;
    };
    std::vector<Bump> bumps;
    for (int c = 0; c < st.components; ++c) {
      Bump b;
      b.center = grid.x_min() + length * (0.25 + 0.5 * uniform());
      b.width = length * (0.025 + 0.075 * uniform());
      b.amplitude = 0.5 + uniform();
      b.phase = 2.0 * M_PI * uniform();
      b.k = 4.0 * (uniform() - 0.5);
      bumps.push_back(b);
    }
    return normalize(Wavefunction::sample(
        grid,
        [&](double x) {
          Complex sum(0.0, 0.0);
          for (const Bump& b : bumps) {
            const double d = (x - b.center) / b.width;
            sum += std::polar(b.amplitude * std::exp(-0.5 * d * d), b.phase + b.k * x);
          }
          return sum;
        },
        t0));
  }
  const GroundStateResult gs = ground_state_imaginary_time(cfg, normalize(gaussian(0.0)).at_time(t0),
                                                           s.ground_state.dtau, s.ground_state.tol,
                                                           s.ground_state.max_iter);
  if (relaxed_converged) *relaxed_converged = gs.converged;
  return gs.state;
}

std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_scenario(s)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lqm
