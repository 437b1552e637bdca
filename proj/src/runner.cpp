#include "lqm/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lqm/calculus.hpp"
#include "lqm/diagnostics.hpp"
#include "lqm/output.hpp"
#include "lqm/variational.hpp"

namespace lqm {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kDiagnosticsColumns{
    "step",           "time",          "norm",
    "energy",         "continuity_sup", "continuity_l2",
    "action_simple_running", "action_standard_running", "hamilton_r1"};

using Summary = std::vector<std::pair<std::string, double>>;

struct Outputs {
  fs::path dir;
  CsvTable diagnostics{kDiagnosticsColumns};
  Summary summary;
  std::map<std::string, bool> flags;
  std::optional<CsvTable> verify;
  std::vector<std::pair<std::size_t, Wavefunction>> snapshots;
};

struct PropagationStats {
  Trajectory trajectory;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double norm_drift = 0.0;
  double continuity_sup_max = 0.0;
  double continuity_l2_max = 0.0;
  double action_simple = 0.0;
  double action_standard = 0.0;
  double hamilton_r1_max = 0.0;
  double hamilton_symmetry_max = 0.0;
  double final_time = 0.0;
};

PropagationStats run_propagation(const HamiltonianConfig& cfg, const Wavefunction& psi0,
                                 const PropagationPlan& plan, Outputs& out) {
  PropagationStats st{Trajectory(plan.record_stride)};
  const double norm0 = norm_squared(psi0);
  st.initial_energy = energy(cfg, psi0, plan.t_start);
  out.diagnostics.add_row({0.0, plan.t_start, norm0, st.initial_energy, kNaN, kNaN, 0.0, 0.0, kNaN});

  Observer observer = [&](const StepView& v) {
    const double n = norm_squared(v.after);
    const double e = energy(cfg, v.after, v.time);
    const ContinuityReport c = continuity_residual(cfg, v.before, v.after);
    const HamiltonResidual h = hamilton_equations_residual(cfg, v.before, v.after);
    const double dt = v.after.time() - v.before.time();
    const double t_mid = 0.5 * (v.before.time() + v.after.time());
    const Grid& grid = v.after.grid();
    const Wavefunction mid(grid, 0.5 * (v.before.amplitudes() + v.after.amplitudes()), t_mid);
    const Wavefunction rate(grid, (v.after.amplitudes() - v.before.amplitudes()) / dt, t_mid);
    const LagrangianSample l = lagrangian_densities(cfg, mid, rate, t_mid);
    st.action_simple += dt * integrate(grid, l.l_simple).real();
    st.action_standard += dt * integrate(grid, l.l_standard);

    st.norm_drift = std::max(st.norm_drift, std::abs(n - norm0));
    st.continuity_sup_max = std::max(st.continuity_sup_max, c.sup_norm);
    st.continuity_l2_max = std::max(st.continuity_l2_max, c.l2_norm);
    st.hamilton_r1_max = std::max(st.hamilton_r1_max, h.r1);
    st.hamilton_symmetry_max = std::max(st.hamilton_symmetry_max, std::abs(h.r2 - h.r1));
    st.final_energy = e;
    st.final_time = v.time;
    if (v.step % plan.record_stride == 0 || v.step == plan.n_steps) {
      out.diagnostics.add_row({static_cast<double>(v.step), v.time, n, e, c.sup_norm, c.l2_norm,
                               st.action_simple, st.action_standard, h.r1});
    }
  };

  st.final_energy = st.initial_energy;
  st.final_time = plan.t_start;
  st.trajectory = propagate(cfg, psi0, plan, {observer});
  for (std::size_t k = 0; k < st.trajectory.size(); ++k) {
    out.snapshots.emplace_back(k * plan.record_stride, st.trajectory[k]);
  }

  const double drift = std::abs(st.final_energy - st.initial_energy) /
                       (st.initial_energy != 0.0 ? std::abs(st.initial_energy) : 1.0);
  out.summary = {{"steps", static_cast<double>(plan.n_steps)},
                 {"final_time", st.final_time},
                 {"initial_energy", st.initial_energy},
                 {"final_energy", st.final_energy},
                 {"energy_drift_relative", drift},
                 {"norm_drift", st.norm_drift},
                 {"continuity_sup_max", st.continuity_sup_max},
                 {"continuity_l2_max", st.continuity_l2_max},
                 {"action_simple", st.action_simple},
                 {"action_standard", st.action_standard},
                 {"action_gap", std::abs(st.action_simple - st.action_standard)},
                 {"hamilton_r1_max", st.hamilton_r1_max}};
  return st;
}

Wavefunction stationarity_profile(const Grid& grid) {
  const double c = 0.5 * (grid.x_min() + grid.x_max());
  const double w = grid.length() / 20.0;
  return Wavefunction::sample(grid, [&](double x) {
    const double d = (x - c) / w;
    return Complex(1.0, 0.5) * std::exp(-d * d);
  });
}

bool run_verify(const Scenario& s, const HamiltonianConfig& cfg, const PropagationStats& st, Outputs& out) {
  const VerifySpec& v = s.verify;
  const Trajectory& traj = st.trajectory;
  CsvTable table({"check", "value", "threshold", "pass"});
  bool all = true;
  auto add = [&](const std::string& name, double value, double threshold) {
    const bool pass = std::isfinite(value) && value <= threshold;
    all = all && pass;
    table.add_text_row({name, format_number(value), format_number(threshold), pass ? "true" : "false"});
    out.summary.emplace_back("verify_" + name, value);
  };

  add("norm_drift", st.norm_drift, v.norm_drift);
  if (cfg.is_static()) {
    const double drift = std::abs(st.final_energy - st.initial_energy) /
                         (st.initial_energy != 0.0 ? std::abs(st.initial_energy) : 1.0);
    add("energy_drift_relative", drift, v.energy_drift);
  }
  add("continuity_sup_max", st.continuity_sup_max, v.continuity_sup);

  const ActionValue simple = action(cfg, traj, Density::simple);
  const ActionValue standard = action(cfg, traj, Density::standard);
  add("action_gap", std::abs(simple.value - standard.value), v.action_gap);

  double reality = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const LagrangianSample l =
        lagrangian_densities(cfg, traj[k], trajectory_time_derivative(traj, k), traj[k].time());
    reality = std::max(reality, std::abs(integrate(traj.grid(), l.l_simple).imag()));
  }
  add("lagrangian_imaginary_max", reality, v.reality);

  const StationarityResult sr = stationarity_test(cfg, traj, stationarity_profile(traj.grid()), v.epsilons);
  out.summary.emplace_back("stationarity_slope", sr.slope);
  add("stationarity_slope_error", std::abs(sr.slope - 2.0), v.slope_tolerance);

  add("hamilton_r2_minus_r1_max", st.hamilton_symmetry_max, v.hamilton_symmetry);

  // Constant global phase: density, current, energy and action unchanged.
  const double gamma = 0.37 * cfg.constants.hbar;
  const Wavefunction& last = traj[traj.size() - 1];
  const Wavefunction moved = gauge_transform(last, gamma, cfg.constants.hbar);
  const ProbabilityFields p0 = probability_fields(cfg, last, last.time());
  const ProbabilityFields p1 = probability_fields(cfg, moved, last.time());
  const double e0 = energy(cfg, last, last.time());
  const double e1 = energy(cfg, moved, last.time());
  std::vector<Wavefunction> shifted;
  for (const auto& psi : traj.snapshots()) shifted.push_back(gauge_transform(psi, gamma, cfg.constants.hbar));
  const ActionValue s1 = action(cfg, Trajectory(std::move(shifted), traj.record_stride()), Density::simple);
  const double scale = std::max({1.0, std::abs(e0), std::abs(simple.value)});
  const double gauge = std::max({(p1.rho - p0.rho).cwiseAbs().maxCoeff(),
                                 (p1.current - p0.current).cwiseAbs().maxCoeff(), std::abs(e1 - e0),
                                 std::abs(s1.value - simple.value)}) / scale;
  add("gauge_invariance", gauge, v.gauge);

  out.verify = std::move(table);
  return all;
}

void write_outputs(const Outputs& out, const RunManifest& m) {
  write_file_atomic((out.dir / "diagnostics.csv").string(), out.diagnostics.str());
  CsvTable summary({"key", "value"});
  for (const auto& [k, v] : out.summary) summary.add_text_row({k, format_number(v)});
  write_file_atomic((out.dir / "summary.csv").string(), summary.str());
  if (out.verify) write_file_atomic((out.dir / "verify.csv").string(), out.verify->str());
  for (const auto& [step, psi] : out.snapshots) {
    char name[64];
    std::snprintf(name, sizeof name, "step_%06zu.csv", step);
    write_file_atomic((out.dir / "snapshots" / name).string(), snapshot_csv(psi, step));
  }

  nlohmann::ordered_json j;
  j["scenario"] = m.scenario_name;
  j["scenario_hash"] = m.scenario_hash;
  j["toolkit_version"] = m.version;
  j["task"] = m.task;
  j["wall_time_seconds"] = m.wall_time_seconds;
  j["exit_code"] = m.exit_code;
  j["flags"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.flags) j["flags"][k] = v;
  j["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.summary) {
    if (std::isfinite(v)) j["summary"][k] = v;
    else j["summary"][k] = format_number(v);
  }
  write_file_atomic((out.dir / "manifest.json").string(), j.dump(2) + "\n");
}

}  // namespace

RunManifest run(Scenario scenario, const RunOptions& opts, std::ostream& log) {
  const auto wall_start = std::chrono::steady_clock::now();
  if (opts.out_dir) scenario.output.dir = *opts.out_dir;
  if (opts.stride) scenario.output.record_stride = *opts.stride;
  validate_scenario(scenario);

  const Grid grid = build_grid(scenario);
  const HamiltonianConfig cfg = build_hamiltonian(scenario, grid);
  Outputs out;
  out.dir = scenario.output.dir;
  RunManifest m;
  m.scenario_name = scenario.name;
  m.scenario_hash = scenario_hash(scenario);
  m.version = kToolkitVersion;
  m.task = scenario.task;
  m.output_dir = out.dir.string();

  const std::string& task = scenario.task;
  const std::size_t stride = scenario.output.record_stride;
  if (task == "propagate" || task == "gp-propagate" || task == "verify") {
    bool relaxed = true;
    const Wavefunction psi0 = build_initial_state(scenario, grid, cfg, &relaxed);
    if (scenario.initial_state.kind == "ground-state") out.flags["initial_state_converged"] = relaxed;
    const PropagationStats st = run_propagation(cfg, psi0, build_plan(scenario), out);
    if (task == "verify") {
      const bool passed = run_verify(scenario, cfg, st, out);
      out.flags["verify_passed"] = passed;
      if (!passed) m.exit_code = kExitNotConverged;
    }
    if (!relaxed) m.exit_code = kExitNotConverged;
  } else if (task == "ground-state") {
    Scenario start = scenario;
    if (start.initial_state.kind == "ground-state") start.initial_state.kind = "gaussian";
    const Wavefunction psi0 = build_initial_state(start, grid, cfg);
    const auto& gs = scenario.ground_state;
    const GroundStateResult r = ground_state_imaginary_time(cfg, psi0, gs.dtau, gs.tol, gs.max_iter);
    const auto& h = r.energy_history;
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (k % stride == 0 || k + 1 == h.size()) {
        out.diagnostics.add_row({static_cast<double>(k), static_cast<double>(k) * gs.dtau, kNaN, h[k],
                                 kNaN, kNaN, kNaN, kNaN, kNaN});
      }
    }
    out.snapshots.emplace_back(r.iterations, r.state);
    out.summary = {{"energy", r.energy},
                   {"chemical_potential", r.chemical_potential},
                   {"eigen_residual", r.residual},
                   {"iterations", static_cast<double>(r.iterations)},
                   {"converged", r.converged ? 1.0 : 0.0},
                   {"norm", norm_squared(r.state)}};
    out.flags["converged"] = r.converged;
    if (!r.converged) m.exit_code = kExitNotConverged;
  } else if (task == "rayleigh-ritz") {
    const auto& rs = scenario.rayleigh_ritz;
    TrialFamily family = trial_family_from_string(rs.family);
    for (const auto& [k, v] : rs.frozen) family = freeze_parameter(family, k, v);
    std::vector<double> init = rs.initial_params;
    for (const auto& [k, v] : rs.frozen) init[family.parameter_index(k)] = v;
    NelderMeadOptions nm;
    nm.max_iter = rs.max_iter;
    nm.tol = rs.tol;
    const RayleighRitzResult r = rayleigh_ritz_minimize(cfg, grid, family, init, nm);
    for (std::size_t k = 0; k < r.history.size(); ++k) {
      if ((k + 1) % stride == 0 || k + 1 == r.history.size()) {
        out.diagnostics.add_row({static_cast<double>(k + 1), kNaN, kNaN, r.history[k], kNaN, kNaN, kNaN,
                                 kNaN, kNaN});
      }
    }
    const Wavefunction best = family(r.params, grid);
    out.snapshots.emplace_back(r.iterations, best);
    out.summary = {{"energy", r.energy},
                   {"iterations", static_cast<double>(r.iterations)},
                   {"evaluations", static_cast<double>(r.evaluations)},
                   {"converged", r.converged ? 1.0 : 0.0}};
    for (std::size_t i = 0; i < r.params.size(); ++i) {
      out.summary.emplace_back("param_" + family.parameter_names[i], r.params[i]);
    }
    out.flags["converged"] = r.converged;
    if (!r.converged) m.exit_code = kExitNotConverged;
  }
  if (!scenario.output.write_snapshots) out.snapshots.clear();

  m.flags = out.flags;
  m.summary = out.summary;
  m.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  write_outputs(out, m);

  if (!opts.quiet) {
    log << scenario.name << " [" << task << "] -> " << m.output_dir << "\n";
    for (const auto& [k, v] : m.summary) log << "  " << k << " = " << format_number(v) << "\n";
    for (const auto& [k, v] : m.flags) log << "  " << k << ": " << (v ? "yes" : "no") << "\n";
  }
  return m;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kExitIo;
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const InvalidArgument*>(&e)) return kExitConfig;
  if (dynamic_cast<const GridMismatch*>(&e)) return kExitConfig;
  return kExitNotConverged;
}

int run_batch(const std::string& dir, const std::string& out_root, unsigned jobs, bool quiet,
              std::ostream& log) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".json") files.push_back(it->path());
  }
  if (ec) throw IoError("cannot list " + dir + ": " + ec.message());
  std::sort(files.begin(), files.end());

  std::vector<int> codes(files.size(), kExitOk);
  std::vector<std::string> logs(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      std::ostringstream os;
      try {
        RunOptions opts;
        opts.out_dir = (fs::path(out_root) / files[i].stem()).string();
        opts.quiet = quiet;
        codes[i] = run(parse_scenario(files[i].string()), opts, os).exit_code;
      } catch (const std::exception& e) {
        codes[i] = exit_code_for(e);
        os << "error: " << e.what() << "\n";
      }
      os << files[i].filename().string() << ": exit " << codes[i] << "\n";
      logs[i] = os.str();
    }
  };
  const unsigned width = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(files.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < width; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int worst = kExitOk;
  for (std::size_t i = 0; i < files.size(); ++i) {
    log << logs[i];
    worst = std::max(worst, codes[i]);
  }
  if (files.empty()) log << "no scenario files in " << dir << "\n";
  return worst;
}

}  // namespace lqm
