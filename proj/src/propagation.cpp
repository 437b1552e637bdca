#include "lqm/propagation.hpp"

#include <cmath>
#include <optional>
#include <string>

#include <unsupported/Eigen/FFT>

#include "lqm/calculus.hpp"

namespace lqm {

std::string_view to_string(Scheme s) {
  return s == Scheme::crank_nicolson ? "crank-nicolson" : "split-operator";
}

std::string_view to_string(NonlinearUpdate u) {
  switch (u) {
    case NonlinearUpdate::none: return "none";
    case NonlinearUpdate::recompute_each_half_step: return "recompute-each-half-step";
    case NonlinearUpdate::predictor_corrector: return "predictor-corrector";
  }
  return "none";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "crank-nicolson") return Scheme::crank_nicolson;
  if (name == "split-operator") return Scheme::split_operator;
  throw InvalidArgument("unknown scheme '" + std::string(name) +
                        "' (expected crank-nicolson or split-operator)");
}

NonlinearUpdate nonlinear_update_from_string(std::string_view name) {
  if (name == "none") return NonlinearUpdate::none;
  if (name == "recompute-each-half-step") return NonlinearUpdate::recompute_each_half_step;
  if (name == "predictor-corrector") return NonlinearUpdate::predictor_corrector;
  throw InvalidArgument("unknown nonlinear_update '" + std::string(name) +
                        "' (expected none, recompute-each-half-step or predictor-corrector)");
}

void PropagationPlan::validate(const HamiltonianConfig& cfg) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive and finite");
  if (!std::isfinite(t_start)) throw InvalidArgument("t_start must be finite");
  if (record_stride < 1) throw InvalidArgument("record_stride must be >= 1");
  const bool nonlinear = nonlinear_update != NonlinearUpdate::none;
  if (nonlinear && !cfg.interaction) {
    throw InvalidArgument("nonlinear_update is " + std::string(to_string(nonlinear_update)) +
                          " but no interaction is configured");
  }
  if (!nonlinear && cfg.interaction) {
    throw InvalidArgument("an interaction is configured, so nonlinear_update must not be none");
  }
}

Trajectory::Trajectory(std::size_t record_stride) : record_stride_(record_stride) {
  if (record_stride < 1) throw InvalidArgument("record_stride must be >= 1");
}

Trajectory::Trajectory(std::vector<Wavefunction> snapshots, std::size_t record_stride)
    : Trajectory(record_stride) {
  for (auto& s : snapshots) append(std::move(s));
}

void Trajectory::append(Wavefunction psi) {
  if (!snapshots_.empty()) {
    require_same_grid(snapshots_.front().grid(), psi.grid(), "Trajectory::append");
    if (!(psi.time() > snapshots_.back().time())) {
      throw InvalidArgument("trajectory times must be strictly increasing (got " +
                            std::to_string(psi.time()) + " after " +
                            std::to_string(snapshots_.back().time()) + ")");
    }
  }
  snapshots_.push_back(std::move(psi));
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(snapshots_.size());
  for (const auto& s : snapshots_) t.push_back(s.time());
  return t;
}

const Grid& Trajectory::grid() const {
  if (snapshots_.empty()) throw InvalidArgument("empty trajectory has no grid");
  return snapshots_.front().grid();
}

namespace {

HamiltonianConfig without_interaction(const HamiltonianConfig& cfg) {
  HamiltonianConfig lin = cfg;
  lin.interaction.reset();
  return lin;
}

// One Cayley step with an already assembled operator.
Wavefunction cayley(const BandOperator& h, const ShiftedSolver& solver, const Wavefunction& psi,
                    double dt, double hbar) {
  const Complex half(0.0, 0.5 * dt / hbar);
  const ComplexField rhs = psi.amplitudes() - half * h.apply(psi.amplitudes());
  return Wavefunction(psi.grid(), solver.solve(rhs), psi.time() + dt);
}

Wavefunction cayley(const BandOperator& h, const Wavefunction& psi, double dt, double hbar) {
  const ShiftedSolver solver(h, Complex(0.0, 0.5 * dt / hbar));
  return cayley(h, solver, psi, dt, hbar);
}

// Linear CN step through the same path the nonlinear steps use, so a zero
// mean field reproduces it bit for bit.
Wavefunction cn_with_field(const HamiltonianConfig& cfg, const Wavefunction& psi, double t,
                           double dt, const RealField* mean_field) {
  const BandOperator h = assemble_hamiltonian(cfg, psi.grid(), t + 0.5 * dt, mean_field);
  return cayley(h, psi, dt, cfg.constants.hbar);
}

void check_step_args(const Wavefunction& psi, double t, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive and finite");
  if (!std::isfinite(t)) throw InvalidArgument("t must be finite");
  (void)psi;
}

}  // namespace

Wavefunction step_crank_nicolson(const HamiltonianConfig& cfg, const Wavefunction& psi, double t,
                                 double dt) {
  check_step_args(psi, t, dt);
  const HamiltonianConfig lin = without_interaction(cfg);
  return cn_with_field(lin, psi, t, dt, nullptr).at_time(t + dt);
}

Wavefunction step_gp(const HamiltonianConfig& cfg, const Wavefunction& psi, double t, double dt,
                     const PropagationPlan& plan) {
  check_step_args(psi, t, dt);
  if (!cfg.interaction) throw InvalidArgument("step_gp requires an interaction");
  const TwoBodyInteraction& v2 = *cfg.interaction;
  const Grid& grid = psi.grid();
  const HamiltonianConfig lin = without_interaction(cfg);
  const RealField rho_n = psi.amplitudes().cwiseAbs2();
  const RealField u_n = mean_field_values(v2, grid, rho_n);

  switch (plan.nonlinear_update) {
    case NonlinearUpdate::predictor_corrector: {
      const Wavefunction pred = cn_with_field(lin, psi, t, dt, &u_n);
      const RealField rho_mid = 0.5 * (pred.amplitudes().cwiseAbs2() + rho_n);
      const RealField u_c = mean_field_values(v2, grid, rho_mid);
      return cn_with_field(lin, psi, t, dt, &u_c).at_time(t + dt);
    }
    case NonlinearUpdate::recompute_each_half_step: {
      const Wavefunction half = cn_with_field(lin, psi, t, 0.5 * dt, &u_n);
      const RealField u_half = mean_field_values(v2, grid, half.amplitudes().cwiseAbs2());
      return cn_with_field(lin, psi, t, dt, &u_half).at_time(t + dt);
    }
    case NonlinearUpdate::none:
      break;
  }
  throw InvalidArgument("step_gp needs nonlinear_update other than none");
}

Wavefunction step_split_operator(const HamiltonianConfig& cfg, const Wavefunction& psi, double t,
                                 double dt) {
  check_step_args(psi, t, dt);
  const Grid& grid = psi.grid();
  if (!grid.periodic()) throw InvalidArgument("split-operator stepping needs a periodic grid");
  const double tm = t + 0.5 * dt;
  if (!cfg.a_vec.is_uniform(grid, tm)) {
    throw InvalidArgument("split-operator stepping needs a spatially uniform vector potential");
  }
  const PhysicalConstants& c = cfg.constants;
  c.validate();
  const auto n = static_cast<Eigen::Index>(grid.n_points());
  const double h = grid.dx();
  const double a = cfg.a_vec.is_identically_zero() ? 0.0 : cfg.a_vec.sample(grid, tm)[0];
  const double theta = c.charge * h * a / c.hbar;
  const double scale = c.hbar * c.hbar / (2.0 * c.mass * h * h);

  RealField v = cfg.v1.sample(grid, tm);
  if (!cfg.a0.is_identically_zero()) v += c.charge * cfg.a0.sample(grid, tm);

  auto potential_half = [&](ComplexField& x) {
    RealField total = v;
    if (cfg.interaction) total += mean_field_values(*cfg.interaction, grid, x.cwiseAbs2());
    for (Eigen::Index j = 0; j < n; ++j) x[j] *= std::polar(1.0, -0.5 * dt * total[j] / c.hbar);
  };

  ComplexField x = psi.amplitudes();
  potential_half(x);

  Eigen::FFT<double> fft;
  ComplexField spectrum(n);
  fft.fwd(spectrum, x);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double kh = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(n) - theta;
    const double symbol =
        scale * ((4.0 / 3.0) * (2.0 - 2.0 * std::cos(kh)) - (1.0 / 12.0) * (2.0 - 2.0 * std::cos(2.0 * kh)));
    spectrum[m] *= std::polar(1.0, -dt * symbol / c.hbar);
  }
  fft.inv(x, spectrum);

  potential_half(x);
  return Wavefunction(grid, std::move(x), t + dt);
}

Trajectory propagate(const HamiltonianConfig& cfg, const Wavefunction& psi0,
                     const PropagationPlan& plan, const std::vector<Observer>& observers) {
  plan.validate(cfg);
  const double n0 = norm_squared(psi0);
  if (std::abs(n0 - 1.0) > 1e-8) {
    throw InvalidArgument("propagate: psi0 must be normalized (norm^2 = " + std::to_string(n0) + ")");
  }
  Trajectory traj(plan.record_stride);
  Wavefunction psi = psi0.at_time(plan.t_start);
  traj.append(psi);

  // Static linear CN runs reuse one factorization.
  struct Cached {
    BandOperator h;
    ShiftedSolver solver;
  };
  std::optional<Cached> cache;
  const bool cacheable = plan.scheme == Scheme::crank_nicolson && !cfg.interaction && cfg.is_static();
  if (cacheable) {
    BandOperator h = assemble_hamiltonian(cfg, psi.grid(), plan.t_start);
    ShiftedSolver solver(h, Complex(0.0, 0.5 * plan.dt / cfg.constants.hbar));
    cache.emplace(Cached{std::move(h), std::move(solver)});
  }

  for (std::size_t step = 1; step <= plan.n_steps; ++step) {
    const double t = plan.t_start + static_cast<double>(step - 1) * plan.dt;
    const double t_next = plan.t_start + static_cast<double>(step) * plan.dt;
    Wavefunction next = [&] {
      if (plan.scheme == Scheme::split_operator) return step_split_operator(cfg, psi, t, plan.dt);
      if (cfg.interaction) return step_gp(cfg, psi, t, plan.dt, plan);
      if (cache) return cayley(cache->h, cache->solver, psi, plan.dt, cfg.constants.hbar);
      return step_crank_nicolson(cfg, psi, t, plan.dt);
    }().at_time(t_next);

    const StepView view{step, t_next, psi, next};
    for (const Observer& obs : observers) {
      try {
        obs(view);
      } catch (const std::exception& e) {
        throw PropagationError("observer failed at step " + std::to_string(step) + ", t = " +
                                   std::to_string(t_next) + ": " + e.what(),
                               step, t_next);
      }
    }
    psi = std::move(next);
    if (step % plan.record_stride == 0) traj.append(psi);
  }
  return traj;
}

double eigen_residual(const HamiltonianConfig& cfg, const Wavefunction& phi, double t) {
  const Wavefunction hphi = apply_hamiltonian(cfg, phi, t, cfg.interaction ? &phi : nullptr);
  const double nn = norm_squared(phi);
  const Complex mu = inner_product(phi, hphi) / nn;
  return norm(hphi - mu.real() * phi) / std::sqrt(nn);
}

GroundStateResult ground_state_imaginary_time(const HamiltonianConfig& cfg, const Wavefunction& psi0,
                                              double dtau, double tol, std::size_t max_iter) {
  if (!(dtau > 0.0) || !std::isfinite(dtau)) throw InvalidArgument("dtau must be positive and finite");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (!cfg.is_static()) throw InvalidArgument("imaginary-time relaxation needs static potentials");
  const double t = psi0.time();
  const HamiltonianConfig lin = without_interaction(cfg);
  const double alpha = dtau / cfg.constants.hbar;

  Wavefunction phi = normalize(psi0);
  std::vector<double> history{energy(cfg, phi, t)};

  std::optional<BandOperator> h_static;
  std::optional<ShiftedSolver> solver_static;
  if (!cfg.interaction) {
    h_static.emplace(assemble_hamiltonian(lin, phi.grid(), t));
    solver_static.emplace(*h_static, Complex(alpha, 0.0));
  }

  std::size_t iter = 0;
  bool converged = false;
  while (iter < max_iter) {
    ComplexField next;
    if (solver_static) {
      next = solver_static->solve(phi.amplitudes());
    } else {
      const RealField u = mean_field_values(*cfg.interaction, phi.grid(), phi.amplitudes().cwiseAbs2());
      const BandOperator h = assemble_hamiltonian(lin, phi.grid(), t, &u);
      next = ShiftedSolver(h, Complex(alpha, 0.0)).solve(phi.amplitudes());
    }
    phi = normalize(Wavefunction(phi.grid(), std::move(next), t));
    ++iter;
    history.push_back(energy(cfg, phi, t));
    const double de = std::abs(history[history.size() - 1] - history[history.size() - 2]);
    if (de < tol && eigen_residual(cfg, phi, t) < 10.0 * tol) {
      converged = true;
      break;
    }
  }
  const double mu = chemical_potential(cfg, phi, t);
  const double res = eigen_residual(cfg, phi, t);
  const double e = history.back();
  return GroundStateResult{std::move(phi), e, mu, res, iter, converged, std::move(history)};
}

}  // namespace lqm
