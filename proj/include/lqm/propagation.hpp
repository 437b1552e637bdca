#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "lqm/errors.hpp"
#include "lqm/hamiltonian.hpp"

namespace lqm {

enum class Scheme { crank_nicolson, split_operator };
enum class NonlinearUpdate { none, recompute_each_half_step, predictor_corrector };

std::string_view to_string(Scheme s);
std::string_view to_string(NonlinearUpdate u);
Scheme scheme_from_string(std::string_view name);
NonlinearUpdate nonlinear_update_from_string(std::string_view name);

struct PropagationPlan {
  double dt = 1e-3;
  double t_start = 0.0;
  std::size_t n_steps = 1;
  Scheme scheme = Scheme::crank_nicolson;
  NonlinearUpdate nonlinear_update = NonlinearUpdate::none;
  std::size_t record_stride = 1;

  // Checks dt, stride and that nonlinear_update is none exactly when the
  // configuration has no interaction.
  void validate(const HamiltonianConfig& cfg) const;
  bool operator==(const PropagationPlan&) const = default;
};

// Recorded states of one run, strictly increasing in time, on a single grid.
class Trajectory {
 public:
  explicit Trajectory(std::size_t record_stride = 1);
  Trajectory(std::vector<Wavefunction> snapshots, std::size_t record_stride);

  void append(Wavefunction psi);

  const std::vector<Wavefunction>& snapshots() const { return snapshots_; }
  const Wavefunction& operator[](std::size_t i) const { return snapshots_[i]; }
  std::size_t size() const { return snapshots_.size(); }
  bool empty() const { return snapshots_.empty(); }
  std::size_t record_stride() const { return record_stride_; }
  std::vector<double> times() const;
  const Grid& grid() const;

 private:
  std::vector<Wavefunction> snapshots_;
  std::size_t record_stride_;
};

// Read-only state handed to observers after every step.
struct StepView {
  std::size_t step;  // 1-based index of the step just taken
  double time;       // time at the end of the step
  const Wavefunction& before;
  const Wavefunction& after;
};

using Observer = std::function<void(const StepView&)>;

// An observer threw; carries where the run stopped.
class PropagationError : public Error {
 public:
  PropagationError(const std::string& what, std::size_t step, double time)
      : Error(what), step_(step), time_(time) {}
  std::size_t step() const { return step_; }
  double time() const { return time_; }

 private:
  std::size_t step_;
  double time_;
};

struct GroundStateResult {
  Wavefunction state;
  double energy;
  double chemical_potential;  // <phi, H phi> with the full-weight mean field
  double residual;            // ||H phi - mu phi|| / ||phi||
  std::size_t iterations;
  bool converged;
  std::vector<double> energy_history;  // starts with the energy of psi0
};

// (1 + i dt H / 2hbar) psi_new = (1 - i dt H / 2hbar) psi with H at t + dt/2.
// Interaction terms, if configured, are ignored.
Wavefunction step_crank_nicolson(const HamiltonianConfig& cfg, const Wavefunction& psi, double t,
                                 double dt);

// Nonlinear step for the mean-field equation, using plan.nonlinear_update.
Wavefunction step_gp(const HamiltonianConfig& cfg, const Wavefunction& psi, double t, double dt,
                     const PropagationPlan& plan);

// Strang splitting, kinetic part diagonalized by FFT. Periodic grids with a
// spatially uniform vector potential only. A mean field, if configured, is
// applied in the potential half steps.
Wavefunction step_split_operator(const HamiltonianConfig& cfg, const Wavefunction& psi, double t,
                                 double dt);

// Evolves psi0 (normalized to 1e-8) for plan.n_steps steps. psi0 is recorded
// at plan.t_start, then every record_stride-th step.
Trajectory propagate(const HamiltonianConfig& cfg, const Wavefunction& psi0,
                     const PropagationPlan& plan, const std::vector<Observer>& observers = {});

// Imaginary-time relaxation: backward-Euler steps (1 + dtau H / hbar) phi' = phi,
// renormalized after every step, with the mean field rebuilt from the current
// state. Converged when successive energies differ by less than tol and the
// eigen-residual is below 10 * tol.
GroundStateResult ground_state_imaginary_time(const HamiltonianConfig& cfg, const Wavefunction& psi0,
                                              double dtau = 0.05, double tol = 1e-10,
                                              std::size_t max_iter = 1000000);

// ||H phi - mu phi|| / ||phi|| with mu the Rayleigh quotient of the full-weight operator.
double eigen_residual(const HamiltonianConfig& cfg, const Wavefunction& phi, double t = 0.0);

}  // namespace lqm
