#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lqm/propagation.hpp"

namespace lqm {

struct LagrangianSample {
  ComplexField l_simple;      // conj(psi) (i hbar d_t - H) psi
  RealField l_standard;       // first-order real form
  RealField divergence_term;  // Re(l_simple) - l_standard, a pure spatial divergence
  double time;

  // Real part of l_simple, the density used by Sil.
  RealField sil() const { return l_simple.real(); }
};

// dpsi_dt is supplied by the caller (finite differences or an analytic rate).
// With an interaction, the mean field enters with weight 1/2.
LagrangianSample lagrangian_densities(const HamiltonianConfig& cfg, const Wavefunction& psi,
                                      const Wavefunction& dpsi_dt, double t);

enum class Density { simple, standard };
std::string_view to_string(Density d);
Density density_from_string(std::string_view name);

struct ActionValue {
  double value;      // real part
  double imaginary;  // imaginary part (zero for the standard density)
  double t0;
  double t1;
  double dt;
  Density which;
};

// Time derivative of snapshot k of a uniformly spaced trajectory: centered in
// the interior, second-order one-sided at the ends.
Wavefunction trajectory_time_derivative(const Trajectory& traj, std::size_t k);

// Trapezoid-in-time action over the trajectory window. Needs >= 3 snapshots
// at uniform spacing.
ActionValue action(const HamiltonianConfig& cfg, const Trajectory& traj, Density which);

struct StationarityResult {
  std::vector<std::pair<double, double>> delta_s;  // (epsilon, S[psi + eps eta] - S[psi])
  double slope;  // least-squares slope of log|dS| against log eps, eps = 0 excluded
};

// Time envelope of the perturbation: sin^2 bump supported on the middle
// three quarters of [t0, t1], zero elsewhere.
double perturbation_envelope(double t, double t0, double t1);

// Perturbs every snapshot by eps * envelope(t) * profile and reports the
// change of the simple-density action summed over interior snapshots.
StationarityResult stationarity_test(const HamiltonianConfig& cfg, const Trajectory& traj,
                                     const Wavefunction& profile, const std::vector<double>& epsilons);

struct ParameterBounds {
  double lower;
  double upper;
  bool frozen() const { return lower == upper; }
};

struct TrialFamily {
  std::string name;
  std::vector<std::string> parameter_names;
  std::vector<ParameterBounds> bounds;
  // Returns a normalized state. Parameters must lie within bounds.
  std::function<Wavefunction(const std::vector<double>&, const Grid&)> build;

  Wavefunction operator()(const std::vector<double>& params, const Grid& grid) const;
  std::size_t parameter_index(std::string_view parameter) const;
};

// psi ~ exp(-(x - center)^2 / (4 width^2)); parameters center, width.
TrialFamily gaussian_family();
// Gaussian times exp(i wavenumber x); parameters center, width, wavenumber.
TrialFamily gaussian_phase_family();
// sum_n a_n sin(n pi (x - x_min) / L), n = 1..modes (modes <= 4).
TrialFamily box_sine_family(int modes = 3);
TrialFamily trial_family_from_string(std::string_view name);

// Copy of family with one parameter pinned to value.
TrialFamily freeze_parameter(TrialFamily family, std::string_view parameter, double value);

struct NelderMeadOptions {
  std::size_t max_iter = 500;
  double tol = 1e-10;          // stop when simplex energies span less than tol
  double initial_step = 0.1;   // relative size of the starting simplex
};

struct RayleighRitzResult {
  std::vector<double> params;
  double energy;
  std::vector<double> history;  // best energy after each iteration
  std::size_t iterations;
  std::size_t evaluations;
  bool converged;               // false when max_iter was reached
};

// Nelder-Mead over the free parameters of the family. Candidates are clamped
// to bounds; candidates that cannot be built or give a non-finite energy are
// rejected and the simplex shrinks.
RayleighRitzResult rayleigh_ritz_minimize(const HamiltonianConfig& cfg, const Grid& grid,
                                          const TrialFamily& family,
                                          const std::vector<double>& initial_params,
                                          const NelderMeadOptions& opts = {});

}  // namespace lqm
