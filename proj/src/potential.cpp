#include "lqm/potential.hpp"

#include <cmath>
#include <variant>

#include "lqm/errors.hpp"

namespace lqm {

double TimeModulation::factor(double t) const { return std::sin(omega * t + phase); }

std::string_view to_string(AnalyticKind kind) {
  switch (kind) {
    case AnalyticKind::free: return "free";
    case AnalyticKind::harmonic: return "harmonic";
    case AnalyticKind::box: return "box";
    case AnalyticKind::quartic: return "quartic";
    case AnalyticKind::linear: return "linear";
    case AnalyticKind::constant: return "constant";
  }
  return "free";
}

AnalyticKind analytic_kind_from_string(std::string_view name) {
  for (AnalyticKind k : {AnalyticKind::free, AnalyticKind::harmonic, AnalyticKind::box,
                         AnalyticKind::quartic, AnalyticKind::linear, AnalyticKind::constant}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown potential kind '" + std::string(name) + "'");
}

const std::map<std::string, double>& analytic_defaults(AnalyticKind kind) {
  static const std::map<std::string, double> free_d{};
  static const std::map<std::string, double> harmonic_d{
      {"omega", 1.0}, {"center", 0.0}, {"mass", 1.0}};
  static const std::map<std::string, double> box_d{
      {"left", -1.0}, {"right", 1.0}, {"height", 1.0e3}};
  static const std::map<std::string, double> quartic_d{{"lambda", 1.0}, {"center", 0.0}};
  static const std::map<std::string, double> linear_d{{"slope", 1.0}, {"center", 0.0}};
  static const std::map<std::string, double> constant_d{{"value", 0.0}};
  switch (kind) {
    case AnalyticKind::free: return free_d;
    case AnalyticKind::harmonic: return harmonic_d;
    case AnalyticKind::box: return box_d;
    case AnalyticKind::quartic: return quartic_d;
    case AnalyticKind::linear: return linear_d;
    case AnalyticKind::constant: return constant_d;
  }
  return free_d;
}

namespace {

struct Analytic {
  AnalyticKind kind;
  std::map<std::string, double> p;

  double operator()(double x) const {
    switch (kind) {
      case AnalyticKind::free: return 0.0;
      case AnalyticKind::harmonic: {
        const double d = x - p.at("center");
        return 0.5 * p.at("mass") * p.at("omega") * p.at("omega") * d * d;
      }
      case AnalyticKind::box:
        return (x >= p.at("left") && x <= p.at("right")) ? 0.0 : p.at("height");
      case AnalyticKind::quartic: {
        const double d = x - p.at("center");
        return p.at("lambda") * d * d * d * d;
      }
      case AnalyticKind::linear: return p.at("slope") * (x - p.at("center"));
      case AnalyticKind::constant: return p.at("value");
    }
    return 0.0;
  }
};

struct Sampled {
  Grid grid;
  RealField values;
};

struct Dynamic {
  PotentialField::Callable f;
  bool time_dependent;
};

}  // namespace

struct PotentialField::Impl {
  std::variant<std::monostate, Analytic, Sampled, Dynamic> source;
};

PotentialField::PotentialField() : impl_(std::make_shared<Impl>()) {}

PotentialField PotentialField::sampled(const Grid& grid, RealField values) {
  if (static_cast<std::size_t>(values.size()) != grid.n_points()) {
    throw GridMismatch("sampled potential length differs from grid");
  }
  if (!values.allFinite()) throw NonFiniteValue("sampled potential contains non-finite values");
  PotentialField out;
  out.impl_ = std::make_shared<Impl>(Impl{Sampled{grid, std::move(values)}});
  return out;
}

PotentialField PotentialField::analytic(AnalyticKind kind, std::map<std::string, double> params) {
  std::map<std::string, double> full = analytic_defaults(kind);
  for (const auto& [key, value] : params) {
    if (!full.contains(key)) {
      throw InvalidArgument("potential kind '" + std::string(to_string(kind)) +
                            "' has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw NonFiniteValue("potential parameter '" + key + "' not finite");
    full[key] = value;
  }
  if (kind == AnalyticKind::box && !(full["right"] > full["left"])) {
    throw InvalidArgument("box potential requires right > left");
  }
  PotentialField out;
  out.impl_ = std::make_shared<Impl>(Impl{Analytic{kind, std::move(full)}});
  return out;
}

PotentialField PotentialField::analytic(std::string_view kind,
                                        std::map<std::string, double> params) {
  return analytic(analytic_kind_from_string(kind), std::move(params));
}

PotentialField PotentialField::callable(Callable f, bool time_dependent) {
  if (!f) throw InvalidArgument("callable potential is empty");
  PotentialField out;
  out.impl_ = std::make_shared<Impl>(Impl{Dynamic{std::move(f), time_dependent}});
  return out;
}

PotentialField PotentialField::modulated(TimeModulation modulation) const {
  if (!std::isfinite(modulation.omega) || !std::isfinite(modulation.phase)) {
    throw NonFiniteValue("time modulation parameters must be finite");
  }
  PotentialField out = *this;
  out.modulation_ = modulation;
  return out;
}

RealField PotentialField::sample(const Grid& grid, double t) const {
  const auto n = static_cast<Eigen::Index>(grid.n_points());
  RealField v = RealField::Zero(n);
  std::visit(
      [&](const auto& src) {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, Analytic>) {
          for (Eigen::Index j = 0; j < n; ++j) v[j] = src(grid.x(static_cast<std::size_t>(j)));
        } else if constexpr (std::is_same_v<T, Sampled>) {
          require_same_grid(src.grid, grid, "sampled potential");
          v = src.values;
        } else if constexpr (std::is_same_v<T, Dynamic>) {
          for (Eigen::Index j = 0; j < n; ++j) v[j] = src.f(grid.x(static_cast<std::size_t>(j)), t);
        }
      },
      impl_->source);
  if (modulation_) v *= modulation_->factor(t);
  if (!v.allFinite()) throw NonFiniteValue("potential evaluated to a non-finite value");
  return v;
}

bool PotentialField::is_static() const {
  if (modulation_) return false;
  if (const auto* d = std::get_if<Dynamic>(&impl_->source)) return !d->time_dependent;
  return true;
}

bool PotentialField::is_identically_zero() const {
  if (std::holds_alternative<std::monostate>(impl_->source)) return true;
  if (const auto* a = std::get_if<Analytic>(&impl_->source)) {
    if (a->kind == AnalyticKind::free) return true;
    if (a->kind == AnalyticKind::constant) return a->p.at("value") == 0.0;
  }
  return false;
}

bool PotentialField::is_uniform(const Grid& grid, double t) const {
  const RealField v = sample(grid, t);
  return (v.array() == v[0]).all();
}

}  // namespace lqm
