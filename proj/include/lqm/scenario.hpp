#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lqm/errors.hpp"
#include "lqm/hamiltonian.hpp"
#include "lqm/propagation.hpp"

namespace lqm {

// Schema or validation problem in a scenario file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kSpecVersion = 1;

struct GridSpec {
  double x_min = -10.0;
  double x_max = 10.0;
  std::size_t n_points = 201;
  std::string boundary = "dirichlet";
  bool operator==(const GridSpec&) const = default;
};

// kind is an analytic name ("free", "harmonic", ...) or "sampled".
struct PotentialSpec {
  std::string kind = "free";
  std::map<std::string, double> params;
  std::vector<double> values;  // sampled only
  std::optional<TimeModulation> modulation;
  bool operator==(const PotentialSpec&) const = default;
};

// kind "contact" uses g; "gaussian-kernel" uses
// V2(x, x') = strength * exp(-(x - x')^2 / (2 range^2)).
struct InteractionSpec {
  std::string kind = "contact";
  double g = 0.0;
  double strength = 0.0;
  double range = 1.0;
  int particle_count = 2;
  bool operator==(const InteractionSpec&) const = default;
};

// kind "gaussian": center/width/wavenumber. "random": smooth random mixture of
// `components` Gaussians drawn from rng_seed. "ground-state": imaginary-time
// relaxation (ground_state section) started from the gaussian parameters.
struct InitialStateSpec {
  std::string kind = "gaussian";
  double center = 0.0;
  double width = 1.0;
  double wavenumber = 0.0;
  int components = 4;
  bool operator==(const InitialStateSpec&) const = default;
};

struct PropagationSpec {
  double dt = 1e-3;
  double t_start = 0.0;
  std::size_t n_steps = 1000;
  std::string scheme = "crank-nicolson";
  std::string nonlinear_update;  // defaults to none / predictor-corrector
  bool operator==(const PropagationSpec&) const = default;
};

struct GroundStateSpec {
  double dtau = 0.05;
  double tol = 1e-10;
  std::size_t max_iter = 1000000;
  bool operator==(const GroundStateSpec&) const = default;
};

struct RayleighRitzSpec {
  std::string family = "gaussian";
  std::vector<double> initial_params;  // defaults depend on the family
  std::map<std::string, double> frozen;
  std::size_t max_iter = 500;
  double tol = 1e-10;
  bool operator==(const RayleighRitzSpec&) const = default;
};

struct VerifySpec {
  double norm_drift = 1e-10;
  double energy_drift = 1e-8;
  double continuity_sup = 1e-2;
  double action_gap = 1e-8;
  double reality = 1e-6;
  double slope_tolerance = 0.15;
  double hamilton_symmetry = 1e-12;
  double gauge = 1e-12;
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4};
  bool operator==(const VerifySpec&) const = default;
};

struct OutputSpec {
  std::string dir = "out";
  std::size_t record_stride = 1;
  bool write_snapshots = true;
  bool operator==(const OutputSpec&) const = default;
};

struct Scenario {
  int spec_version = kSpecVersion;
  std::string name;
  std::string task;  // propagate | ground-state | rayleigh-ritz | gp-propagate | verify
  std::optional<std::uint64_t> rng_seed;
  GridSpec grid;
  PhysicalConstants constants;
  PotentialSpec v1;
  PotentialSpec a0;
  PotentialSpec a_vec;
  std::optional<InteractionSpec> interaction;
  InitialStateSpec initial_state;
  PropagationSpec propagation;
  GroundStateSpec ground_state;
  RayleighRitzSpec rayleigh_ritz;
  VerifySpec verify;
  OutputSpec output;

  bool operator==(const Scenario&) const = default;
};

// Parses and validates; every default is filled in. Errors name the key path
// and, where it can be found, the line.
Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario(const std::string& path);

// Canonical JSON with every field present.
std::string serialize_scenario(const Scenario& s);

// Semantic checks beyond the schema (grid, potentials, task parameters).
void validate_scenario(const Scenario& s);

// Objects built from a validated scenario.
Grid build_grid(const Scenario& s);
HamiltonianConfig build_hamiltonian(const Scenario& s, const Grid& grid);
PropagationPlan build_plan(const Scenario& s);
Wavefunction build_initial_state(const Scenario& s, const Grid& grid, const HamiltonianConfig& cfg,
                                 bool* relaxed_converged = nullptr);

// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

}  // namespace lqm
