#include "lqm/wavefunction.hpp"

#include <cmath>
#include <string>

#include "lqm/errors.hpp"

namespace lqm {

namespace {

void clamp_boundary(const Grid& grid, ComplexField& a) {
  if (grid.boundary() == Boundary::dirichlet) {
    a[0] = Complex(0.0, 0.0);
    a[a.size() - 1] = Complex(0.0, 0.0);
  }
}

}  // namespace

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) throw GridMismatch(std::string(context) + ": operands live on different grids");
}

Wavefunction::Wavefunction(Grid grid, ComplexField amplitudes, double time)
    : grid_(grid), amplitudes_(std::move(amplitudes)), time_(time) {
  if (static_cast<std::size_t>(amplitudes_.size()) != grid_.n_points()) {
    throw GridMismatch("wavefunction has " + std::to_string(amplitudes_.size()) +
                          " amplitudes but the grid has " + std::to_string(grid_.n_points()) +
                          " points");
  }
  if (!std::isfinite(time_)) throw NonFiniteValue("wavefunction time is not finite");
  for (Eigen::Index j = 0; j < amplitudes_.size(); ++j) {
    if (!std::isfinite(amplitudes_[j].real()) || !std::isfinite(amplitudes_[j].imag())) {
      throw NonFiniteValue("non-finite amplitude at index " + std::to_string(j));
    }
  }
  clamp_boundary(grid_, amplitudes_);
}

Wavefunction Wavefunction::zeros(const Grid& grid, double time) {
  return Wavefunction(grid, ComplexField::Zero(static_cast<Eigen::Index>(grid.n_points())), time);
}

Wavefunction Wavefunction::sample(const Grid& grid, const std::function<Complex(double)>& f,
                                  double time) {
  ComplexField a(static_cast<Eigen::Index>(grid.n_points()));
  for (std::size_t j = 0; j < grid.n_points(); ++j) a[static_cast<Eigen::Index>(j)] = f(grid.x(j));
  return Wavefunction(grid, std::move(a), time);
}

Wavefunction Wavefunction::at_time(double t) const {
  Wavefunction out = *this;
  out.time_ = t;
  return out;
}

Wavefunction Wavefunction::conjugated() const {
  Wavefunction out = *this;
  out.amplitudes_ = amplitudes_.conjugate();
  return out;
}

Wavefunction& Wavefunction::operator+=(const Wavefunction& other) {
  require_same_grid(grid_, other.grid_, "wavefunction addition");
  amplitudes_ += other.amplitudes_;
  return *this;
}

Wavefunction& Wavefunction::operator-=(const Wavefunction& other) {
  require_same_grid(grid_, other.grid_, "wavefunction subtraction");
  amplitudes_ -= other.amplitudes_;
  return *this;
}

Wavefunction& Wavefunction::operator*=(Complex factor) {
  amplitudes_ *= factor;
  return *this;
}

}  // namespace lqm
