#pragma once

#include <array>
#include <memory>

#include "lqm/wavefunction.hpp"

namespace lqm {

// Pentadiagonal operator on a grid. Entry (j, j+d) for d in [-2, 2] is stored
// at bands[d + 2][j]; on periodic grids the column index wraps. On Dirichlet
// grids only the interior block (rows/columns 1..n-2) is meaningful and the
// boundary rows are kept at zero.
class BandOperator {
 public:
  static constexpr int kHalfWidth = 2;

  explicit BandOperator(const Grid& grid);

  const Grid& grid() const { return grid_; }
  Complex& at(std::size_t row, int offset) { return bands_[offset + kHalfWidth][static_cast<Eigen::Index>(row)]; }
  Complex at(std::size_t row, int offset) const { return bands_[offset + kHalfWidth][static_cast<Eigen::Index>(row)]; }

  ComplexField apply(const ComplexField& x) const;

  // Largest |A(i,j) - conj(A(j,i))| over stored entries.
  double hermiticity_defect() const;

 private:
  Grid grid_;
  std::array<ComplexField, 2 * kHalfWidth + 1> bands_;
};

// Factorization of (I + alpha * H) restricted to the free unknowns of the grid.
// Dirichlet grids use a LAPACK banded LU; periodic grids (wrap-around corners)
// use a sparse LU.
class ShiftedSolver {
 public:
  ShiftedSolver(const BandOperator& h, Complex alpha);
  ~ShiftedSolver();
  ShiftedSolver(ShiftedSolver&&) noexcept;
  ShiftedSolver& operator=(ShiftedSolver&&) noexcept;

  // Returns x with (I + alpha H) x = rhs. Dirichlet endpoints of x are zero.
  ComplexField solve(const ComplexField& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lqm
