#pragma once

#include <complex>
#include <functional>

#include <Eigen/Core>

#include "lqm/grid.hpp"

namespace lqm {

using Complex = std::complex<double>;
using ComplexField = Eigen::VectorXcd;
using RealField = Eigen::VectorXd;

// Complex amplitudes sampled on a Grid at one time instant.
//
// Construction enforces the storage invariants: the amplitude count matches
// the grid, every value is finite, and Dirichlet endpoints are clamped to
// exactly zero.
class Wavefunction {
 public:
  Wavefunction(Grid grid, ComplexField amplitudes, double time = 0.0);

  static Wavefunction zeros(const Grid& grid, double time = 0.0);
  static Wavefunction sample(const Grid& grid, const std::function<Complex(double)>& f,
                             double time = 0.0);

  const Grid& grid() const { return grid_; }
  const ComplexField& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t j) const { return amplitudes_[static_cast<Eigen::Index>(j)]; }
  std::size_t size() const { return grid_.n_points(); }
  double time() const { return time_; }

  Wavefunction at_time(double t) const;
  Wavefunction conjugated() const;

  Wavefunction& operator+=(const Wavefunction& other);
  Wavefunction& operator-=(const Wavefunction& other);
  Wavefunction& operator*=(Complex factor);

  friend Wavefunction operator+(Wavefunction a, const Wavefunction& b) { return a += b; }
  friend Wavefunction operator-(Wavefunction a, const Wavefunction& b) { return a -= b; }
  friend Wavefunction operator*(Complex s, Wavefunction a) { return a *= s; }
  friend Wavefunction operator*(Wavefunction a, Complex s) { return a *= s; }

 private:
  Grid grid_;
  ComplexField amplitudes_;
  double time_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* context);

}  // namespace lqm
