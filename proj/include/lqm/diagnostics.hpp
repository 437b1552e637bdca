#pragma once

#include "lqm/hamiltonian.hpp"

namespace lqm {

struct ProbabilityFields {
  RealField rho;      // |psi|^2
  RealField current;  // Re[conj(psi) P psi] / m
  double time;
};

struct ContinuityReport {
  RealField residual;  // d rho/dt + dJ/dx at each node
  double sup_norm;
  double l2_norm;      // quadrature norm
  double dt_used;
};

struct CanonicalFields {
  ComplexField pi;  // i hbar conj(psi)
  double hamiltonian_functional;
};

struct HamiltonResidual {
  double r1;  // || d_t psi - H psi_mid / (i hbar) ||
  double r2;  // same equation written for Pi = i hbar conj(psi)
};

ProbabilityFields probability_fields(const HamiltonianConfig& cfg, const Wavefunction& psi, double t);

// Two-snapshot check of d_t rho + d_x J = 0. J is evaluated at the mean state
// (psi_before + psi_after)/2 and the mid time; J and the residual are zero at
// Dirichlet endpoints.
ContinuityReport continuity_residual(const HamiltonianConfig& cfg, const Wavefunction& psi_before,
                                     const Wavefunction& psi_after);

// Pi and (1/i hbar) * integral of Pi H psi. With an interaction the mean
// field carries the same 1/2 weight as energy().
CanonicalFields canonical_fields(const HamiltonianConfig& cfg, const Wavefunction& psi, double t);

// Finite-difference residuals of both Hamilton equations between two
// snapshots, with H (and any mean field) taken at the midpoint.
HamiltonResidual hamilton_equations_residual(const HamiltonianConfig& cfg,
                                             const Wavefunction& psi_before,
                                             const Wavefunction& psi_after);

// exp(i delta_gamma / hbar) * psi.
Wavefunction gauge_transform(const Wavefunction& psi, double delta_gamma, double hbar);

}  // namespace lqm
