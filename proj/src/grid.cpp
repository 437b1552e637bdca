#include "lqm/grid.hpp"

#include <cmath>
#include <string>

#include "lqm/errors.hpp"

namespace lqm {

std::string_view to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "dirichlet";
}

Boundary boundary_from_string(std::string_view name) {
  if (name == "dirichlet") return Boundary::dirichlet;
  if (name == "periodic") return Boundary::periodic;
  throw InvalidArgument("unknown boundary '" + std::string(name) +
                        "' (expected 'dirichlet' or 'periodic')");
}

Grid::Grid(double x_min, double x_max, std::size_t n_points, Boundary boundary)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points), boundary_(boundary), dx_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw InvalidArgument("grid bounds must be finite");
  }
  if (!(x_max > x_min)) {
    throw InvalidArgument("grid requires x_max > x_min (empty interval)");
  }
  if (n_points < kMinPoints) {
    throw InvalidArgument("grid requires n_points >= 8, got " + std::to_string(n_points));
  }
  const double cells = boundary == Boundary::periodic ? static_cast<double>(n_points)
                                                      : static_cast<double>(n_points - 1);
  dx_ = (x_max - x_min) / cells;
  if (!(dx_ > 0.0)) throw InvalidArgument("grid spacing underflowed to zero");
}

Eigen::VectorXd Grid::coordinates() const {
  Eigen::VectorXd xs(static_cast<Eigen::Index>(n_points_));
  for (std::size_t j = 0; j < n_points_; ++j) xs[static_cast<Eigen::Index>(j)] = x(j);
  return xs;
}

Eigen::VectorXd Grid::quadrature_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_points_), dx_);
  if (boundary_ == Boundary::dirichlet) {
    w[0] *= 0.5;
    w[w.size() - 1] *= 0.5;
  }
  return w;
}

Grid make_grid(double x_min, double x_max, std::size_t n_points, Boundary boundary) {
  return Grid(x_min, x_max, n_points, boundary);
}

}  // namespace lqm
