#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Core>

namespace lqm {

enum class Boundary { dirichlet, periodic };

std::string_view to_string(Boundary b);
Boundary boundary_from_string(std::string_view name);

// Uniform 1-D lattice. Dirichlet grids include both endpoints
// (dx = L/(n-1)); periodic grids omit the right endpoint (dx = L/n).
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 8;

  Grid(double x_min, double x_max, std::size_t n_points, Boundary boundary);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t n_points() const { return n_points_; }
  double dx() const { return dx_; }
  Boundary boundary() const { return boundary_; }
  bool periodic() const { return boundary_ == Boundary::periodic; }
  double length() const { return x_max_ - x_min_; }

  double x(std::size_t j) const { return x_min_ + static_cast<double>(j) * dx_; }
  Eigen::VectorXd coordinates() const;

  // Trapezoidal weights for Dirichlet, rectangle weights for periodic.
  Eigen::VectorXd quadrature_weights() const;

  bool operator==(const Grid&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_points_;
  Boundary boundary_;
  double dx_;
};

Grid make_grid(double x_min, double x_max, std::size_t n_points, Boundary boundary);

}  // namespace lqm
