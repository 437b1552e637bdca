#pragma once

#include <optional>

#include <Eigen/Core>

#include "lqm/band_operator.hpp"
#include "lqm/potential.hpp"

namespace lqm {

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
  double charge = 1.0;

  void validate() const;
  bool operator==(const PhysicalConstants&) const = default;
};

// Two-body potential V2(x, x') of identical bosons, either the contact form
// g * delta(x - x') or a symmetric kernel matrix sampled on the grid.
class TwoBodyInteraction {
 public:
  enum class Kind { contact, kernel };

  static TwoBodyInteraction contact(double g, int particle_count);
  static TwoBodyInteraction kernel(Eigen::MatrixXd v2, int particle_count);

  Kind kind() const { return kind_; }
  double coupling() const { return g_; }
  const Eigen::MatrixXd& matrix() const { return v2_; }
  int particle_count() const { return particle_count_; }
  // Number of partners felt by one particle, N - 1.
  double partner_count() const { return static_cast<double>(particle_count_ - 1); }

 private:
  TwoBodyInteraction(Kind kind, double g, Eigen::MatrixXd v2, int particle_count);

  Kind kind_;
  double g_;
  Eigen::MatrixXd v2_;
  int particle_count_;
};

struct HamiltonianConfig {
  PhysicalConstants constants;
  PotentialField v1;
  PotentialField a0;
  PotentialField a_vec;
  std::optional<TwoBodyInteraction> interaction;

  // No potential depends on time.
  bool is_static() const;
};

// (-i hbar d/dx - q A) psi with the central first derivative.
Wavefunction apply_mechanical_momentum(const HamiltonianConfig& cfg, const Wavefunction& psi,
                                       double t);

// Mean-field potential (N-1) * integral V2(x, x') |phi(x')|^2 dx'.
// Warns on stderr when phi is not normalized to within 1e-6.
PotentialField mean_field_potential(const TwoBodyInteraction& interaction, const Wavefunction& phi);
RealField mean_field_values(const TwoBodyInteraction& interaction, const Grid& grid,
                            const RealField& density);

// Banded matrix of K + V1 + q A0 (+ extra_diagonal) at time t, where K is the
// gauge-covariant kinetic operator. K is assembled from link differences
//   D psi = exp(-i theta) psi_b - psi_a,  theta = (q / hbar) * integral of A over the link,
// on nearest-neighbour links (weight 4/3) and next-nearest links (weight -1/3),
// which makes it the fourth-order five-point Laplacian when A = 0. Dirichlet
// boundaries close the stencil by odd reflection.
BandOperator assemble_hamiltonian(const HamiltonianConfig& cfg, const Grid& grid, double t,
                                  const RealField* extra_diagonal = nullptr);

// Pointwise kinetic energy density built from |link difference|^2 terms. Its
// quadrature equals Re <psi, K psi> exactly.
RealField kinetic_energy_density(const HamiltonianConfig& cfg, const Wavefunction& psi, double t);

// H psi. When an interaction is configured, mean_field_source supplies the
// orbital that generates the mean field (usually psi itself).
Wavefunction apply_hamiltonian(const HamiltonianConfig& cfg, const Wavefunction& psi, double t,
                               const Wavefunction* mean_field_source = nullptr);

// Energy functional <psi, H psi> for normalized psi. With an interaction the
// mean-field term enters with weight 1/2 (energy per particle of the Hartree
// product).
double energy(const HamiltonianConfig& cfg, const Wavefunction& psi, double t);

// <phi, H_GP phi> with the full-weight mean field.
double chemical_potential(const HamiltonianConfig& cfg, const Wavefunction& phi, double t);

}  // namespace lqm
