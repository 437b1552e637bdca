#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "lqm/wavefunction.hpp"

namespace lqm {

// Multiplies a potential by sin(omega * t + phase).
struct TimeModulation {
  double omega = 1.0;
  double phase = 0.0;

  double factor(double t) const;
  bool operator==(const TimeModulation&) const = default;
};

enum class AnalyticKind { free, harmonic, box, quartic, linear, constant };

std::string_view to_string(AnalyticKind kind);
AnalyticKind analytic_kind_from_string(std::string_view name);

// Parameter names (with defaults) accepted by each analytic kind.
const std::map<std::string, double>& analytic_defaults(AnalyticKind kind);

// A real scalar field V(x, t) on the grid. Used for the one-body potential,
// the scalar potential A0 and the single vector-potential component.
//
// Named analytic kinds:
//   free      0
//   harmonic  0.5 * mass * omega^2 * (x - center)^2
//   box       0 on [left, right], height outside
//   quartic   lambda * (x - center)^4
//   linear    slope * (x - center)
//   constant  value
class PotentialField {
 public:
  using Callable = std::function<double(double x, double t)>;

  PotentialField();  // identically zero

  static PotentialField zero() { return PotentialField(); }
  static PotentialField sampled(const Grid& grid, RealField values);
  static PotentialField analytic(AnalyticKind kind, std::map<std::string, double> params = {});
  static PotentialField analytic(std::string_view kind, std::map<std::string, double> params = {});
  // time_dependent = false promises that f ignores t.
  static PotentialField callable(Callable f, bool time_dependent = true);

  PotentialField modulated(TimeModulation modulation) const;

  RealField sample(const Grid& grid, double t) const;

  bool is_static() const;
  bool is_identically_zero() const;
  // True when the sampled field is the same value at every grid point.
  bool is_uniform(const Grid& grid, double t) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  std::optional<TimeModulation> modulation_;
};

}  // namespace lqm
