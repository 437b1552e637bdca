#include "lqm/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "lqm/calculus.hpp"
#include "lqm/errors.hpp"

namespace lqm {

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("hbar must be positive and finite");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("mass must be positive and finite");
  if (!std::isfinite(charge)) throw InvalidArgument("charge must be finite");
}

TwoBodyInteraction::TwoBodyInteraction(Kind kind, double g, Eigen::MatrixXd v2, int particle_count)
    : kind_(kind), g_(g), v2_(std::move(v2)), particle_count_(particle_count) {}

TwoBodyInteraction TwoBodyInteraction::contact(double g, int particle_count) {
  if (!std::isfinite(g)) throw InvalidArgument("contact coupling g must be finite");
  if (particle_count < 1) throw InvalidArgument("particle count N must be >= 1");
  return TwoBodyInteraction(Kind::contact, g, {}, particle_count);
}

TwoBodyInteraction TwoBodyInteraction::kernel(Eigen::MatrixXd v2, int particle_count) {
  if (particle_count < 1) throw InvalidArgument("particle count N must be >= 1");
  if (v2.rows() != v2.cols()) throw InvalidArgument("interaction kernel must be square");
  if (!v2.allFinite()) throw InvalidArgument("interaction kernel contains non-finite values");
  if (v2 != v2.transpose()) throw InvalidArgument("interaction kernel must be symmetric");
  return TwoBodyInteraction(Kind::kernel, 0.0, std::move(v2), particle_count);
}

bool HamiltonianConfig::is_static() const {
  return v1.is_static() && a0.is_static() && a_vec.is_static();
}

namespace {

struct Link {
  Eigen::Index a;
  Eigen::Index b;
  double c;    // coefficient of |u psi_b - psi_a|^2
  Complex u;   // exp(-i theta)
};

struct LinkSet {
  std::vector<Link> links;
  // Dirichlet odd-reflection closure: next-nearest links that cross a wall
  // contribute crossing_c * |psi_j|^2 at these nodes.
  double crossing_c = 0.0;
  std::vector<Eigen::Index> crossing_nodes;
};

LinkSet kinetic_links(const HamiltonianConfig& cfg, const Grid& grid, double t) {
  cfg.constants.validate();
  const auto n = static_cast<Eigen::Index>(grid.n_points());
  const double h = grid.dx();
  const double scale = cfg.constants.hbar * cfg.constants.hbar / (2.0 * cfg.constants.mass * h * h);
  const double c_near = scale * 4.0 / 3.0;
  const double c_next = -scale / 12.0;

  // theta on nearest-neighbour link j -> j+1 by the midpoint value of A.
  RealField theta = RealField::Zero(n);
  if (!cfg.a_vec.is_identically_zero() && cfg.constants.charge != 0.0) {
    const RealField a = cfg.a_vec.sample(grid, t);
    const double k = cfg.constants.charge * h / cfg.constants.hbar;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index jp = (j + 1) % n;
      theta[j] = k * 0.5 * (a[j] + a[jp]);
    }
  }
  auto phase = [](double th) { return th == 0.0 ? Complex(1.0, 0.0) : std::polar(1.0, -th); };

  LinkSet set;
  if (grid.periodic()) {
    set.links.reserve(static_cast<std::size_t>(2 * n));
    for (Eigen::Index j = 0; j < n; ++j) {
      set.links.push_back({j, (j + 1) % n, c_near, phase(theta[j])});
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      set.links.push_back({j, (j + 2) % n, c_next, phase(theta[j] + theta[(j + 1) % n])});
    }
  } else {
    set.links.reserve(static_cast<std::size_t>(2 * n));
    for (Eigen::Index j = 0; j + 1 < n; ++j) set.links.push_back({j, j + 1, c_near, phase(theta[j])});
    for (Eigen::Index j = 0; j + 2 < n; ++j) {
      set.links.push_back({j, j + 2, c_next, phase(theta[j] + theta[j + 1])});
    }
    // Ghost psi_{-1} = -psi_1: half of |psi_1 - psi_{-1}|^2 = 4|psi_1|^2 belongs to the box.
    set.crossing_c = 2.0 * c_next;
    set.crossing_nodes = {1, n - 2};
  }
  return set;
}

bool is_wall(const Grid& grid, Eigen::Index j) {
  return !grid.periodic() && (j == 0 || j == static_cast<Eigen::Index>(grid.n_points()) - 1);
}

RealField diagonal_potential(const HamiltonianConfig& cfg, const Grid& grid, double t) {
  RealField v = cfg.v1.sample(grid, t);
  if (!cfg.a0.is_identically_zero()) v += cfg.constants.charge * cfg.a0.sample(grid, t);
  return v;
}

double normalization_defect(const Wavefunction& phi) { return std::abs(norm_squared(phi) - 1.0); }

}  // namespace

BandOperator assemble_hamiltonian(const HamiltonianConfig& cfg, const Grid& grid, double t,
                                  const RealField* extra_diagonal) {
  BandOperator op(grid);
  const LinkSet set = kinetic_links(cfg, grid, t);
  const auto n = static_cast<Eigen::Index>(grid.n_points());

  auto add = [&](Eigen::Index row, Eigen::Index col, Complex v) {
    if (is_wall(grid, row) || is_wall(grid, col)) return;
    Eigen::Index d = col - row;
    if (grid.periodic()) {
      if (d > n / 2) d -= n;
      if (d < -n / 2) d += n;
    }
    op.at(static_cast<std::size_t>(row), static_cast<int>(d)) += v;
  };
  for (const Link& l : set.links) {
    add(l.a, l.a, l.c);
    add(l.b, l.b, l.c);
    add(l.a, l.b, -l.c * l.u);
    add(l.b, l.a, -l.c * std::conj(l.u));
  }
  for (Eigen::Index j : set.crossing_nodes) add(j, j, set.crossing_c);

  RealField v = diagonal_potential(cfg, grid, t);
  if (extra_diagonal) {
    if (extra_diagonal->size() != n) throw GridMismatch("extra diagonal length differs from grid");
    v += *extra_diagonal;
  }
  for (Eigen::Index j = 0; j < n; ++j) add(j, j, v[j]);
  return op;
}

RealField kinetic_energy_density(const HamiltonianConfig& cfg, const Wavefunction& psi, double t) {
  const Grid& grid = psi.grid();
  const LinkSet set = kinetic_links(cfg, grid, t);
  const ComplexField& a = psi.amplitudes();
  RealField density = RealField::Zero(a.size());
  for (const Link& l : set.links) {
    const double value = l.c * std::norm(l.u * a[l.b] - a[l.a]);
    const bool wall_a = is_wall(grid, l.a);
    const bool wall_b = is_wall(grid, l.b);
    if (wall_a && wall_b) continue;
    if (wall_a) {
      density[l.b] += value;
    } else if (wall_b) {
      density[l.a] += value;
    } else {
      density[l.a] += 0.5 * value;
      density[l.b] += 0.5 * value;
    }
  }
  for (Eigen::Index j : set.crossing_nodes) density[j] += set.crossing_c * std::norm(a[j]);
  // Every node that carries density has quadrature weight dx.
  return density;
}

Wavefunction apply_mechanical_momentum(const HamiltonianConfig& cfg, const Wavefunction& psi,
                                       double t) {
  cfg.constants.validate();
  const Grid& grid = psi.grid();
  ComplexField out = Complex(0.0, -cfg.constants.hbar) * first_derivative(psi).amplitudes();
  if (!cfg.a_vec.is_identically_zero()) {
    const RealField a = cfg.a_vec.sample(grid, t);
    out.array() -= cfg.constants.charge * a.array().cast<Complex>() * psi.amplitudes().array();
  }
  return Wavefunction(grid, std::move(out), psi.time());
}

RealField mean_field_values(const TwoBodyInteraction& interaction, const Grid& grid,
                            const RealField& density) {
  const auto n = static_cast<Eigen::Index>(grid.n_points());
  if (density.size() != n) throw GridMismatch("mean field: density length differs from grid");
  const double partners = interaction.partner_count();
  if (interaction.kind() == TwoBodyInteraction::Kind::contact) {
    return partners * interaction.coupling() * density;
  }
  const Eigen::MatrixXd& v2 = interaction.matrix();
  if (v2.rows() != n) {
    throw GridMismatch("interaction kernel is " + std::to_string(v2.rows()) + "x" +
                       std::to_string(v2.cols()) + " but the grid has " + std::to_string(n) +
                       " points");
  }
  const RealField weighted = grid.quadrature_weights().cwiseProduct(density);
  return partners * (v2 * weighted);
}

PotentialField mean_field_potential(const TwoBodyInteraction& interaction, const Wavefunction& phi) {
  if (normalization_defect(phi) > 1e-6) {
    std::cerr << "warning: mean_field_potential called with |phi|^2 integrating to "
              << norm_squared(phi) << "\n";
  }
  return PotentialField::sampled(
      phi.grid(), mean_field_values(interaction, phi.grid(), phi.amplitudes().cwiseAbs2()));
}

Wavefunction apply_hamiltonian(const HamiltonianConfig& cfg, const Wavefunction& psi, double t,
                               const Wavefunction* mean_field_source) {
  std::optional<RealField> mf;
  if (cfg.interaction) {
    if (!mean_field_source) {
      throw InvalidArgument("apply_hamiltonian: interaction configured but no mean-field source given");
    }
    require_same_grid(psi.grid(), mean_field_source->grid(), "apply_hamiltonian");
    mf = mean_field_values(*cfg.interaction, psi.grid(), mean_field_source->amplitudes().cwiseAbs2());
  }
  const BandOperator h = assemble_hamiltonian(cfg, psi.grid(), t, mf ? &*mf : nullptr);
  return Wavefunction(psi.grid(), h.apply(psi.amplitudes()), psi.time());
}

namespace {

double expectation(const BandOperator& h, const Wavefunction& psi, const char* what) {
  const ComplexField hpsi = h.apply(psi.amplitudes());
  const RealField w = psi.grid().quadrature_weights();
  Complex sum(0.0, 0.0);
  double magnitude = 0.0;
  for (Eigen::Index j = 0; j < hpsi.size(); ++j) {
    const Complex term = w[j] * std::conj(psi.amplitudes()[j]) * hpsi[j];
    sum += term;
    magnitude += std::abs(term);
  }
  if (std::abs(sum.imag()) > 1e-8 * std::max(1.0, magnitude)) {
    throw InternalError(std::string(what) + " has imaginary part " + std::to_string(sum.imag()) +
                        "; the Hamiltonian is not Hermitian");
  }
  if (!std::isfinite(sum.real())) throw NonFiniteValue(std::string(what) + " is not finite");
  return sum.real();
}

}  // namespace

double energy(const HamiltonianConfig& cfg, const Wavefunction& psi, double t) {
  std::optional<RealField> mf;
  if (cfg.interaction) {
    mf = 0.5 * mean_field_values(*cfg.interaction, psi.grid(), psi.amplitudes().cwiseAbs2());
  }
  return expectation(assemble_hamiltonian(cfg, psi.grid(), t, mf ? &*mf : nullptr), psi, "energy");
}

double chemical_potential(const HamiltonianConfig& cfg, const Wavefunction& phi, double t) {
  std::optional<RealField> mf;
  if (cfg.interaction) {
    mf = mean_field_values(*cfg.interaction, phi.grid(), phi.amplitudes().cwiseAbs2());
  }
  return expectation(assemble_hamiltonian(cfg, phi.grid(), t, mf ? &*mf : nullptr), phi,
                     "chemical potential");
}

}  // namespace lqm
