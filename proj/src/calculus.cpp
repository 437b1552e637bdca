#include "lqm/calculus.hpp"

#include <cmath>

#include "lqm/errors.hpp"

namespace lqm {

namespace {

// Applies a 3-point stencil c_m f[j-1] + c_0 f[j] + c_p f[j+1].
template <typename Vec>
Vec three_point(const Grid& grid, const Vec& f, double c_m, double c_0, double c_p) {
  const Eigen::Index n = f.size();
  Vec out = Vec::Zero(n);
  if (grid.periodic()) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index jm = (j == 0) ? n - 1 : j - 1;
      const Eigen::Index jp = (j == n - 1) ? 0 : j + 1;
      out[j] = c_m * f[jm] + c_0 * f[j] + c_p * f[jp];
    }
  } else {
    for (Eigen::Index j = 1; j + 1 < n; ++j) {
      out[j] = c_m * f[j - 1] + c_0 * f[j] + c_p * f[j + 1];
    }
  }
  return out;
}

}  // namespace

Complex inner_product(const Wavefunction& bra, const Wavefunction& ket) {
  require_same_grid(bra.grid(), ket.grid(), "inner_product");
  const RealField w = bra.grid().quadrature_weights();
  const ComplexField& a = bra.amplitudes();
  const ComplexField& b = ket.amplitudes();
  Complex sum(0.0, 0.0);
  for (Eigen::Index j = 0; j < a.size(); ++j) sum += w[j] * (std::conj(a[j]) * b[j]);
  return sum;
}

double norm_squared(const Wavefunction& psi) {
  const RealField w = psi.grid().quadrature_weights();
  return w.dot(psi.amplitudes().cwiseAbs2());
}

double norm(const Wavefunction& psi) { return std::sqrt(norm_squared(psi)); }

double integrate(const Grid& grid, const RealField& f) {
  if (static_cast<std::size_t>(f.size()) != grid.n_points()) {
    throw GridMismatch("integrate: field length differs from grid");
  }
  return grid.quadrature_weights().dot(f);
}

Complex integrate(const Grid& grid, const ComplexField& f) {
  if (static_cast<std::size_t>(f.size()) != grid.n_points()) {
    throw GridMismatch("integrate: field length differs from grid");
  }
  const RealField w = grid.quadrature_weights();
  Complex sum(0.0, 0.0);
  for (Eigen::Index j = 0; j < f.size(); ++j) sum += w[j] * f[j];
  return sum;
}

Wavefunction laplacian(const Wavefunction& psi) {
  const double h2 = psi.grid().dx() * psi.grid().dx();
  return Wavefunction(psi.grid(),
                      three_point(psi.grid(), psi.amplitudes(), 1.0 / h2, -2.0 / h2, 1.0 / h2),
                      psi.time());
}

Wavefunction first_derivative(const Wavefunction& psi) {
  const double c = 0.5 / psi.grid().dx();
  return Wavefunction(psi.grid(), three_point(psi.grid(), psi.amplitudes(), -c, 0.0, c),
                      psi.time());
}

RealField first_derivative(const Grid& grid, const RealField& f) {
  if (static_cast<std::size_t>(f.size()) != grid.n_points()) {
    throw GridMismatch("first_derivative: field length differs from grid");
  }
  const double c = 0.5 / grid.dx();
  return three_point(grid, f, -c, 0.0, c);
}

Wavefunction normalize(const Wavefunction& psi) {
  const double n = norm(psi);
  if (!(n > 0.0)) throw InvalidArgument("cannot normalize a zero-norm wavefunction");
  return Wavefunction(psi.grid(), psi.amplitudes() / n, psi.time());
}

}  // namespace lqm
