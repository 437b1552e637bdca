#include "lqm/diagnostics.hpp"

#include <cmath>
#include <string>

#include "lqm/calculus.hpp"
#include "lqm/errors.hpp"

namespace lqm {

namespace {

double snapshot_dt(const Wavefunction& before, const Wavefunction& after, const char* what) {
  require_same_grid(before.grid(), after.grid(), what);
  const double dt = after.time() - before.time();
  if (dt == 0.0) throw InvalidArgument(std::string(what) + ": snapshots have identical times");
  if (!std::isfinite(dt)) throw InvalidArgument(std::string(what) + ": non-finite time difference");
  return dt;
}

RealField current_of(const HamiltonianConfig& cfg, const Wavefunction& psi, double t) {
  const Wavefunction p = apply_mechanical_momentum(cfg, psi, t);
  RealField j = (psi.amplitudes().conjugate().array() * p.amplitudes().array()).real() /
                cfg.constants.mass;
  if (!psi.grid().periodic()) {
    j[0] = 0.0;
    j[j.size() - 1] = 0.0;
  }
  return j;
}

}  // namespace

ProbabilityFields probability_fields(const HamiltonianConfig& cfg, const Wavefunction& psi, double t) {
  return {psi.amplitudes().cwiseAbs2(), current_of(cfg, psi, t), t};
}

ContinuityReport continuity_residual(const HamiltonianConfig& cfg, const Wavefunction& psi_before,
                                     const Wavefunction& psi_after) {
  const double dt = snapshot_dt(psi_before, psi_after, "continuity_residual");
  const Grid& grid = psi_before.grid();
  const double t_mid = 0.5 * (psi_before.time() + psi_after.time());
  const Wavefunction mid(grid, 0.5 * (psi_before.amplitudes() + psi_after.amplitudes()), t_mid);

  RealField r = (psi_after.amplitudes().cwiseAbs2() - psi_before.amplitudes().cwiseAbs2()) / dt;
  r += first_derivative(grid, current_of(cfg, mid, t_mid));
  if (!grid.periodic()) {
    r[0] = 0.0;
    r[r.size() - 1] = 0.0;
  }
  const double sup = r.cwiseAbs().maxCoeff();
  const double l2 = std::sqrt(integrate(grid, RealField(r.cwiseAbs2())));
  return {std::move(r), sup, l2, dt};
}

CanonicalFields canonical_fields(const HamiltonianConfig& cfg, const Wavefunction& psi, double t) {
  const double hbar = cfg.constants.hbar;
  const Complex ih(0.0, hbar);
  ComplexField pi = ih * psi.amplitudes().conjugate();
  for (Eigen::Index j = 0; j < pi.size(); ++j) {
    if (pi[j] != ih * std::conj(psi.amplitudes()[j])) throw InternalError("Pi != i hbar conj(psi)");
  }

  HamiltonianConfig lin = cfg;
  lin.interaction.reset();
  ComplexField hpsi = apply_hamiltonian(lin, psi, t).amplitudes();
  if (cfg.interaction) {
    const RealField u = mean_field_values(*cfg.interaction, psi.grid(), psi.amplitudes().cwiseAbs2());
    hpsi.array() += 0.5 * u.array().cast<Complex>() * psi.amplitudes().array();
  }
  const Complex h = integrate(psi.grid(), ComplexField(pi.cwiseProduct(hpsi))) / ih;
  if (std::abs(h.imag()) > 1e-8 * std::max(1.0, std::abs(h))) {
    throw InternalError("Hamiltonian functional has imaginary part " + std::to_string(h.imag()));
  }
  return {std::move(pi), h.real()};
}

HamiltonResidual hamilton_equations_residual(const HamiltonianConfig& cfg,
                                             const Wavefunction& psi_before,
                                             const Wavefunction& psi_after) {
  const double dt = snapshot_dt(psi_before, psi_after, "hamilton_equations_residual");
  const Grid& grid = psi_before.grid();
  const double t_mid = 0.5 * (psi_before.time() + psi_after.time());
  const Wavefunction mid(grid, 0.5 * (psi_before.amplitudes() + psi_after.amplitudes()), t_mid);
  const Complex ih(0.0, cfg.constants.hbar);

  const ComplexField rate = apply_hamiltonian(cfg, mid, t_mid, cfg.interaction ? &mid : nullptr)
                                .amplitudes() / ih;
  const ComplexField res1 = (psi_after.amplitudes() - psi_before.amplitudes()) / dt - rate;

  // Pi = i hbar conj(psi) obeys d_t Pi / (i hbar) = conj(H psi / (i hbar)).
  const ComplexField pi_rate =
      ih * (psi_after.amplitudes().conjugate() - psi_before.amplitudes().conjugate()) / dt;
  const ComplexField res2 = pi_rate / ih - rate.conjugate();

  const double r1 = std::sqrt(integrate(grid, RealField(res1.cwiseAbs2())));
  const double r2 = std::sqrt(integrate(grid, RealField(res2.cwiseAbs2())));
  return {r1, r2};
}

Wavefunction gauge_transform(const Wavefunction& psi, double delta_gamma, double hbar) {
  if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
  if (!std::isfinite(delta_gamma)) throw InvalidArgument("delta_gamma must be finite");
  if (delta_gamma == 0.0) return psi;
  return std::polar(1.0, delta_gamma / hbar) * psi;
}

}  // namespace lqm
