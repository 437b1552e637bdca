#pragma once

// Discrete calculus on 1-D grids: second-order central stencils and
// trapezoid/rectangle quadrature.

#include "lqm/wavefunction.hpp"

namespace lqm {

// Quadrature of conj(bra) * ket.
Complex inner_product(const Wavefunction& bra, const Wavefunction& ket);

double norm_squared(const Wavefunction& psi);
double norm(const Wavefunction& psi);

// Quadrature of a real or complex field sampled on the grid.
double integrate(const Grid& grid, const RealField& f);
Complex integrate(const Grid& grid, const ComplexField& f);

// (psi[j+1] - 2 psi[j] + psi[j-1]) / dx^2. Dirichlet endpoints are zero.
Wavefunction laplacian(const Wavefunction& psi);

// (psi[j+1] - psi[j-1]) / (2 dx). Dirichlet endpoints are zero.
Wavefunction first_derivative(const Wavefunction& psi);

// Central difference of a real field with the same boundary handling.
RealField first_derivative(const Grid& grid, const RealField& f);

// Positive real rescaling to unit norm. Throws InvalidArgument on zero norm.
Wavefunction normalize(const Wavefunction& psi);

}  // namespace lqm
