#pragma once

// Reference computations written independently of the library internals:
// explicit dense matrices and direct sums.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "lqm/grid.hpp"
#include "lqm/wavefunction.hpp"

namespace oracle {

using lqm::Complex;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline VectorXd weights(const lqm::Grid& g) {
  VectorXd w = VectorXd::Constant(static_cast<Eigen::Index>(g.n_points()), g.dx());
  if (!g.periodic()) {
    w[0] *= 0.5;
    w[w.size() - 1] *= 0.5;
  }
  return w;
}

inline Complex inner(const lqm::Grid& g, const VectorXcd& a, const VectorXcd& b) {
  const VectorXd w = weights(g);
  Complex s(0.0, 0.0);
  for (Eigen::Index j = 0; j < a.size(); ++j) s += w[j] * std::conj(a[j]) * b[j];
  return s;
}

// Fourth-order five-point -(hbar^2/2m) d^2/dx^2 as a dense matrix, with the
// ghost values psi(-x) = -psi(x) across Dirichlet walls.
inline MatrixXd kinetic_matrix(const lqm::Grid& g, double hbar = 1.0, double mass = 1.0) {
  const auto n = static_cast<Eigen::Index>(g.n_points());
  const double h = g.dx();
  const double s = hbar * hbar / (2.0 * mass) / (12.0 * h * h);
  const double stencil[5] = {1.0, -16.0, 30.0, -16.0, 1.0};
  MatrixXd k = MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!g.periodic() && (j == 0 || j == n - 1)) continue;
    for (int d = -2; d <= 2; ++d) {
      Eigen::Index c = j + d;
      double sign = 1.0;
      if (g.periodic()) {
        c = ((c % n) + n) % n;
      } else if (c < 0) {
        c = -c;  // reflection through x_0 (psi_0 = 0)
        sign = -1.0;
      } else if (c > n - 1) {
        c = 2 * (n - 1) - c;
        sign = -1.0;
      }
      if (!g.periodic() && (c == 0 || c == n - 1)) continue;
      k(j, c) += sign * s * stencil[d + 2];
    }
  }
  return k;
}

// Interior block of a Dirichlet operator.
inline MatrixXd interior(const MatrixXd& m) {
  const Eigen::Index n = m.rows();
  return m.block(1, 1, n - 2, n - 2);
}

// Lowest eigenvalue of kinetic + diag(v) by dense diagonalization.
inline double ground_energy(const lqm::Grid& g, const VectorXd& v) {
  MatrixXd h = kinetic_matrix(g);
  h.diagonal() += v;
  if (!g.periodic()) h = interior(h);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

// Central-difference -i hbar d/dx - q A as a dense matrix.
inline MatrixXcd momentum_matrix(const lqm::Grid& g, const VectorXd& a, double hbar, double q) {
  const auto n = static_cast<Eigen::Index>(g.n_points());
  MatrixXcd p = MatrixXcd::Zero(n, n);
  const Complex c(0.0, -hbar / (2.0 * g.dx()));
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!g.periodic() && (j == 0 || j == n - 1)) {
      p(j, j) = -q * a[j];
      continue;
    }
    p(j, (j + 1) % n) += c;
    p(j, (j - 1 + n) % n) -= c;
    p(j, j) -= q * a[j];
  }
  return p;
}

inline VectorXcd random_field(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  VectorXcd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = Complex(nd(gen), nd(gen));
  return v;
}

// Random smooth state: a few Gaussians with random phases, normalized.
inline lqm::Wavefunction random_smooth(const lqm::Grid& g, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double l = g.length();
  VectorXcd v = VectorXcd::Zero(static_cast<Eigen::Index>(g.n_points()));
  for (int c = 0; c < 3; ++c) {
    const double x0 = g.x_min() + l * (0.3 + 0.4 * u(gen));
    const double w = l * (0.04 + 0.04 * u(gen));
    const double k = 3.0 * (u(gen) - 0.5);
    const double ph = 6.28 * u(gen);
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      const double x = g.x(static_cast<std::size_t>(j));
      v[j] += std::polar(std::exp(-(x - x0) * (x - x0) / (2 * w * w)), k * x + ph);
    }
  }
  lqm::Wavefunction psi(g, v);
  const double nn = std::sqrt(inner(g, psi.amplitudes(), psi.amplitudes()).real());
  return lqm::Wavefunction(g, psi.amplitudes() / nn);
}

inline double max_abs(const VectorXcd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace oracle
