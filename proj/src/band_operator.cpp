#include "lqm/band_operator.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "lqm/errors.hpp"

namespace lqm {

BandOperator::BandOperator(const Grid& grid) : grid_(grid) {
  for (auto& b : bands_) b = ComplexField::Zero(static_cast<Eigen::Index>(grid.n_points()));
}

ComplexField BandOperator::apply(const ComplexField& x) const {
  const auto n = static_cast<Eigen::Index>(grid_.n_points());
  if (x.size() != n) throw GridMismatch("BandOperator::apply: vector length differs from grid");
  ComplexField y = ComplexField::Zero(n);
  if (grid_.periodic()) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex acc(0.0, 0.0);
      for (int d = -kHalfWidth; d <= kHalfWidth; ++d) {
        const Eigen::Index col = ((j + d) % n + n) % n;
        acc += bands_[d + kHalfWidth][j] * x[col];
      }
      y[j] = acc;
    }
  } else {
    for (Eigen::Index j = 1; j + 1 < n; ++j) {
      Complex acc(0.0, 0.0);
      for (int d = -kHalfWidth; d <= kHalfWidth; ++d) {
        const Eigen::Index col = j + d;
        if (col < 1 || col > n - 2) continue;
        acc += bands_[d + kHalfWidth][j] * x[col];
      }
      y[j] = acc;
    }
  }
  return y;
}

double BandOperator::hermiticity_defect() const {
  const auto n = static_cast<Eigen::Index>(grid_.n_points());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (int d = 1; d <= kHalfWidth; ++d) {
      Eigen::Index col = j + d;
      if (grid_.periodic()) {
        col %= n;
      } else if (col > n - 1) {
        continue;
      }
      const Complex upper = bands_[d + kHalfWidth][j];
      const Complex lower = bands_[-d + kHalfWidth][col];
      worst = std::max(worst, std::abs(upper - std::conj(lower)));
    }
  }
  return worst;
}

struct ShiftedSolver::Impl {
  Grid grid;
  // Dirichlet: LAPACK band storage of the interior block.
  lapack_int m = 0;
  std::vector<Complex> ab;
  std::vector<lapack_int> ipiv;
  // Periodic: general sparse LU.
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;

  explicit Impl(const Grid& g) : grid(g) {}
};

namespace {

constexpr lapack_int kBand = BandOperator::kHalfWidth;
constexpr lapack_int kLdab = 2 * kBand + kBand + 1;

}  // namespace

ShiftedSolver::ShiftedSolver(const BandOperator& h, Complex alpha)
    : impl_(std::make_unique<Impl>(h.grid())) {
  const Grid& grid = h.grid();
  const auto n = static_cast<Eigen::Index>(grid.n_points());
  if (grid.periodic()) {
    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(static_cast<std::size_t>(n) * 5);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int d = -kBand; d <= kBand; ++d) {
        const Eigen::Index col = ((j + d) % n + n) % n;
        Complex v = alpha * h.at(static_cast<std::size_t>(j), d);
        if (d == 0) v += 1.0;
        entries.emplace_back(static_cast<int>(j), static_cast<int>(col), v);
      }
    }
    Eigen::SparseMatrix<Complex> a(n, n);
    a.setFromTriplets(entries.begin(), entries.end());
    a.makeCompressed();
    impl_->lu.compute(a);
    if (impl_->lu.info() != Eigen::Success) {
      throw InternalError("sparse LU factorization of the implicit step matrix failed");
    }
    return;
  }

  // Interior unknowns 1..n-2 map to LAPACK rows 0..m-1.
  const lapack_int m = static_cast<lapack_int>(n - 2);
  impl_->m = m;
  impl_->ab.assign(static_cast<std::size_t>(kLdab * m), Complex(0.0, 0.0));
  impl_->ipiv.assign(static_cast<std::size_t>(m), 0);
  for (lapack_int i = 0; i < m; ++i) {
    for (int d = -kBand; d <= kBand; ++d) {
      const lapack_int col = i + d;
      if (col < 0 || col >= m) continue;
      Complex v = alpha * h.at(static_cast<std::size_t>(i + 1), d);
      if (d == 0) v += 1.0;
      // Column-major band layout: A(i, col) -> ab[kl + ku + i - col + col * ldab].
      impl_->ab[static_cast<std::size_t>(2 * kBand + i - col + col * kLdab)]  = v;
    }
  }
  const lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, m, m, kBand, kBand, impl_->ab.data(),
                                         kLdab, impl_->ipiv.data());
  if (info != 0) {
    throw InternalError("banded LU factorization failed (zgbtrf info=" + std::to_string(info) + ")");
  }
}

ShiftedSolver::~ShiftedSolver() = default;
ShiftedSolver::ShiftedSolver(ShiftedSolver&&) noexcept = default;
ShiftedSolver& ShiftedSolver::operator=(ShiftedSolver&&) noexcept = default;

ComplexField ShiftedSolver::solve(const ComplexField& rhs) const {
  const auto n = static_cast<Eigen::Index>(impl_->grid.n_points());
  if (rhs.size() != n) throw GridMismatch("ShiftedSolver::solve: rhs length differs from grid");
  if (impl_->grid.periodic()) {
    ComplexField x = impl_->lu.solve(rhs);
    if (impl_->lu.info() != Eigen::Success) throw InternalError("sparse LU solve failed");
    return x;
  }
  std::vector<Complex> b(static_cast<std::size_t>(impl_->m));
  for (lapack_int i = 0; i < impl_->m; ++i) {
    b[static_cast<std::size_t>(i)] = rhs[i + 1];
  }
  const lapack_int info =
      LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', impl_->m, kBand, kBand, 1, impl_->ab.data(), kLdab,
                     impl_->ipiv.data(), b.data(), impl_->m);
  if (info != 0) throw InternalError("banded solve failed (zgbtrs info=" + std::to_string(info) + ")");
  ComplexField x = ComplexField::Zero(n);
  for (lapack_int i = 0; i < impl_->m; ++i) {
    x[i + 1] = b[static_cast<std::size_t>(i)];
  }
  return x;
}

}  // namespace lqm
