#include "lqm/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "lqm/calculus.hpp"

namespace lqm {

namespace {

// H psi with the 1/2-weighted mean field of the energy functional.
ComplexField energy_operator_apply(const HamiltonianConfig& cfg, const Wavefunction& psi, double t,
                                   RealField* half_field) {
  HamiltonianConfig lin = cfg;
  lin.interaction.reset();
  ComplexField hpsi = apply_hamiltonian(lin, psi, t).amplitudes();
  RealField u = RealField::Zero(psi.amplitudes().size());
  if (cfg.interaction) {
    u = 0.5 * mean_field_values(*cfg.interaction, psi.grid(), psi.amplitudes().cwiseAbs2());
    hpsi.array() += u.array().cast<Complex>() * psi.amplitudes().array();
  }
  if (half_field) *half_field = std::move(u);
  return hpsi;
}

}  // namespace

LagrangianSample lagrangian_densities(const HamiltonianConfig& cfg, const Wavefunction& psi,
                                      const Wavefunction& dpsi_dt, double t) {
  require_same_grid(psi.grid(), dpsi_dt.grid(), "lagrangian_densities");
  const Grid& grid = psi.grid();
  const Complex ih(0.0, cfg.constants.hbar);
  const ComplexField& a = psi.amplitudes();

  RealField u;
  const ComplexField hpsi = energy_operator_apply(cfg, psi, t, &u);
  const ComplexField time_part = a.conjugate().cwiseProduct(ih * dpsi_dt.amplitudes());
  ComplexField l_simple = time_part - a.conjugate().cwiseProduct(hpsi);

  RealField v = cfg.v1.sample(grid, t) + u;
  if (!cfg.a0.is_identically_zero()) v += cfg.constants.charge * cfg.a0.sample(grid, t);
  const RealField l_standard = time_part.real() - kinetic_energy_density(cfg, psi, t) -
                               v.cwiseProduct(a.cwiseAbs2());
  RealField divergence = l_simple.real() - l_standard;
  return {std::move(l_simple), l_standard, std::move(divergence), t};
}

std::string_view to_string(Density d) { return d == Density::simple ? "simple" : "standard"; }

Density density_from_string(std::string_view name) {
  if (name == "simple") return Density::simple;
  if (name == "standard") return Density::standard;
  throw InvalidArgument("unknown density '" + std::string(name) + "' (expected simple or standard)");
}

namespace {

double uniform_spacing(const Trajectory& traj, std::size_t min_snapshots) {
  if (traj.size() < min_snapshots) {
    throw InvalidArgument("trajectory has " + std::to_string(traj.size()) +
                          " snapshots, at least " + std::to_string(min_snapshots) + " needed");
  }
  const auto t = traj.times();
  const double dt = t[1] - t[0];
  for (std::size_t k = 1; k + 1 < t.size(); ++k) {
    if (std::abs((t[k + 1] - t[k]) - dt) > 1e-9 * dt) {
      throw InvalidArgument("trajectory snapshots are not uniformly spaced");
    }
  }
  return dt;
}

}  // namespace

Wavefunction trajectory_time_derivative(const Trajectory& traj, std::size_t k) {
  const double dt = uniform_spacing(traj, 3);
  const std::size_t last = traj.size() - 1;
  if (k > last) throw InvalidArgument("snapshot index out of range");
  const auto& s = traj.snapshots();
  ComplexField d;
  if (k == 0) {
    d = (-3.0 * s[0].amplitudes() + 4.0 * s[1].amplitudes() - s[2].amplitudes()) / (2.0 * dt);
  } else if (k == last) {
    d = (3.0 * s[last].amplitudes() - 4.0 * s[last - 1].amplitudes() + s[last - 2].amplitudes()) /
        (2.0 * dt);
  } else {
    d = (s[k + 1].amplitudes() - s[k - 1].amplitudes()) / (2.0 * dt);
  }
  return Wavefunction(traj.grid(), std::move(d), s[k].time());
}

ActionValue action(const HamiltonianConfig& cfg, const Trajectory& traj, Density which) {
  const double dt = uniform_spacing(traj, 3);
  const Grid& grid = traj.grid();
  Complex total(0.0, 0.0);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Wavefunction& psi = traj[k];
    const LagrangianSample s =
        lagrangian_densities(cfg, psi, trajectory_time_derivative(traj, k), psi.time());
    const Complex slice = which == Density::simple ? integrate(grid, s.l_simple)
                                                   : Complex(integrate(grid, s.l_standard), 0.0);
    const double w = (k == 0 || k + 1 == traj.size()) ? 0.5 * dt : dt;
    total += w * slice;
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag())) {
    throw NonFiniteValue("action is not finite");
  }
  return {total.real(), total.imag(), traj[0].time(), traj[traj.size() - 1].time(), dt, which};
}

double perturbation_envelope(double t, double t0, double t1) {
  const double margin = 0.125 * (t1 - t0);
  const double a = t0 + margin;
  const double b = t1 - margin;
  if (t <= a || t >= b) return 0.0;
  const double s = std::sin(M_PI * (t - a) / (b - a));
  return s * s;
}

namespace {

// Real part of the simple-density action summed over interior snapshots with
// centered time differences.
double interior_action(const HamiltonianConfig& cfg, const std::vector<Wavefunction>& s, double dt) {
  const Grid& grid = s.front().grid();
  double total = 0.0;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    const Wavefunction d(grid, (s[k + 1].amplitudes() - s[k - 1].amplitudes()) / (2.0 * dt),
                         s[k].time());
    const LagrangianSample l = lagrangian_densities(cfg, s[k], d, s[k].time());
    total += dt * integrate(grid, l.l_simple).real();
  }
  return total;
}

}  // namespace

StationarityResult stationarity_test(const HamiltonianConfig& cfg, const Trajectory& traj,
                                     const Wavefunction& profile, const std::vector<double>& epsilons) {
  const double dt = uniform_spacing(traj, 5);
  require_same_grid(traj.grid(), profile.grid(), "stationarity_test");
  std::set<double> distinct;
  for (double e : epsilons) {
    if (!std::isfinite(e)) throw InvalidArgument("epsilons must be finite");
    if (e != 0.0) distinct.insert(std::abs(e));
  }
  if (distinct.size() < 2) {
    throw InvalidArgument("stationarity_test needs at least two distinct nonzero epsilons");
  }

  const auto& base = traj.snapshots();
  const double t0 = base.front().time();
  const double t1 = base.back().time();
  const double s0 = interior_action(cfg, base, dt);

  StationarityResult out;
  std::vector<double> xs;
  std::vector<double> ys;
  for (double eps : epsilons) {
    std::vector<Wavefunction> moved;
    moved.reserve(base.size());
    for (const Wavefunction& psi : base) {
      const double env = perturbation_envelope(psi.time(), t0, t1);
      moved.push_back(env == 0.0 || eps == 0.0 ? psi : psi + Complex(eps * env, 0.0) * profile.at_time(psi.time()));
    }
    const double ds = interior_action(cfg, moved, dt) - s0;
    out.delta_s.emplace_back(eps, ds);
    if (eps != 0.0 && ds != 0.0) {
      xs.push_back(std::log(std::abs(eps)));
      ys.push_back(std::log(std::abs(ds)));
    }
  }

  out.slope = std::numeric_limits<double>::quiet_NaN();
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx > 0.0) out.slope = sxy / sxx;
  }
  return out;
}

// ---- trial families ----

Wavefunction TrialFamily::operator()(const std::vector<double>& params, const Grid& grid) const {
  if (params.size() != parameter_names.size()) {
    throw InvalidArgument(name + ": expected " + std::to_string(parameter_names.size()) +
                          " parameters, got " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!std::isfinite(params[i]) || params[i] < bounds[i].lower || params[i] > bounds[i].upper) {
      throw InvalidArgument(name + ": parameter " + parameter_names[i] + " = " +
                            std::to_string(params[i]) + " is outside its bounds");
    }
  }
  return build(params, grid);
}

std::size_t TrialFamily::parameter_index(std::string_view parameter) const {
  for (std::size_t i = 0; i < parameter_names.size(); ++i) {
    if (parameter_names[i] == parameter) return i;
  }
  throw InvalidArgument(name + " has no parameter '" + std::string(parameter) + "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Wavefunction gaussian_state(double center, double width, double wavenumber, const Grid& grid) {
  const double inv = 1.0 / (4.0 * width * width);
  return normalize(Wavefunction::sample(grid, [&](double x) {
    const double d = x - center;
    return std::polar(std::exp(-d * d * inv), wavenumber * x);
  }));
}

}  // namespace

TrialFamily gaussian_family() {
  return {"gaussian",
          {"center", "width"},
          {{-kInf, kInf}, {1e-6, kInf}},
          [](const std::vector<double>& p, const Grid& g) { return gaussian_state(p[0], p[1], 0.0, g); }};
}

TrialFamily gaussian_phase_family() {
  return {"gaussian-phase",
          {"center", "width", "wavenumber"},
          {{-kInf, kInf}, {1e-6, kInf}, {-kInf, kInf}},
          [](const std::vector<double>& p, const Grid& g) {
            return gaussian_state(p[0], p[1], p[2], g);
          }};
}

TrialFamily box_sine_family(int modes) {
  if (modes < 1 || modes > 4) throw InvalidArgument("box-sine family supports 1 to 4 modes");
  TrialFamily f;
  f.name = "box-sine";
  for (int n = 1; n <= modes; ++n) {
    f.parameter_names.push_back("a" + std::to_string(n));
    f.bounds.push_back({-10.0, 10.0});
  }
  f.build = [](const std::vector<double>& p, const Grid& g) {
    const double k = M_PI / g.length();
    return normalize(Wavefunction::sample(g, [&](double x) {
      double sum = 0.0;
      for (std::size_t n = 0; n < p.size(); ++n) {
        sum += p[n] * std::sin(static_cast<double>(n + 1) * k * (x - g.x_min()));
      }
      return Complex(sum, 0.0);
    }));
  };
  return f;
}

TrialFamily trial_family_from_string(std::string_view name) {
  if (name == "gaussian") return gaussian_family();
  if (name == "gaussian-phase") return gaussian_phase_family();
  if (name.rfind("box-sine", 0) == 0) {
    if (name == "box-sine") return box_sine_family();
    if (name.size() == 10 && name[8] == '-' && name[9] >= '1' && name[9] <= '4') {
      return box_sine_family(name[9] - '0');
    }
  }
  throw InvalidArgument("unknown trial family '" + std::string(name) +
                        "' (expected gaussian, gaussian-phase, box-sine or box-sine-N)");
}

TrialFamily freeze_parameter(TrialFamily family, std::string_view parameter, double value) {
  const std::size_t i = family.parameter_index(parameter);
  if (!std::isfinite(value)) throw InvalidArgument("frozen value must be finite");
  family.bounds[i] = {value, value};
  return family;
}

// ---- Nelder-Mead ----

RayleighRitzResult rayleigh_ritz_minimize(const HamiltonianConfig& cfg, const Grid& grid,
                                          const TrialFamily& family,
                                          const std::vector<double>& initial_params,
                                          const NelderMeadOptions& opts) {
  const std::size_t np = family.parameter_names.size();
  if (initial_params.size() != np) {
    throw InvalidArgument(family.name + ": expected " + std::to_string(np) + " initial parameters");
  }
  for (std::size_t i = 0; i < np; ++i) {
    const auto& b = family.bounds[i];
    if (!(initial_params[i] >= b.lower && initial_params[i] <= b.upper)) {
      throw InvalidArgument("initial " + family.parameter_names[i] + " is outside its bounds");
    }
  }
  if (!(opts.tol > 0.0)) throw InvalidArgument("optimizer tol must be positive");

  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < np; ++i) {
    if (!family.bounds[i].frozen()) free.push_back(i);
  }
  const std::size_t dim = free.size();
  using Point = std::vector<double>;

  std::size_t evaluations = 0;
  auto full = [&](const Point& p) {
    Point all = initial_params;
    for (std::size_t k = 0; k < dim; ++k) all[free[k]] = p[k];
    return all;
  };
  auto clamp = [&](Point p) {
    for (std::size_t k = 0; k < dim; ++k) {
      const auto& b = family.bounds[free[k]];
      p[k] = std::clamp(p[k], b.lower, b.upper);
    }
    return p;
  };
  auto evaluate = [&](const Point& p) {
    ++evaluations;
    try {
      const double e = energy(cfg, family(full(p), grid), 0.0);
      return std::isfinite(e) ? e : kInf;
    } catch (const Error&) {
      return kInf;
    }
  };

  Point x0(dim);
  for (std::size_t k = 0; k < dim; ++k) x0[k] = initial_params[free[k]];
  const double f0 = evaluate(x0);
  if (!std::isfinite(f0)) throw InvalidArgument(family.name + ": initial parameters give no finite energy");

  RayleighRitzResult result{initial_params, f0, {}, 0, 0, true};
  if (dim == 0) {
    result.evaluations = evaluations;
    return result;
  }

  std::vector<Point> x{x0};
  std::vector<double> f{f0};
  for (std::size_t k = 0; k < dim; ++k) {
    Point v = x0;
    const double step = opts.initial_step * std::max(std::abs(x0[k]), 1.0);
    v[k] += step;
    v = clamp(v);
    if (v[k] == x0[k]) v[k] = x0[k] - step;
    v = clamp(v);
    x.push_back(v);
    f.push_back(evaluate(v));
  }

  std::vector<std::size_t> order(dim + 1);
  auto sort = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    std::vector<Point> xs;
    std::vector<double> fs;
    for (std::size_t i : order) {
      xs.push_back(x[i]);
      fs.push_back(f[i]);
    }
    x = std::move(xs);
    f = std::move(fs);
  };
  auto affine = [&](const Point& a, const Point& b, double s) {
    Point r(dim);
    for (std::size_t k = 0; k < dim; ++k) r[k] = a[k] + s * (b[k] - a[k]);
    return clamp(r);
  };

  bool converged = false;
  std::size_t iter = 0;
  sort();
  while (iter < opts.max_iter) {
    if (std::isfinite(f[dim]) && f[dim] - f[0] < opts.tol) {
      converged = true;
      break;
    }
    ++iter;
    Point c(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) c[k] += x[i][k] / static_cast<double>(dim);
    }
    const Point xr = affine(c, x[dim], -1.0);
    const double fr = evaluate(xr);
    bool shrink = false;
    if (fr < f[0]) {
      const Point xe = affine(c, x[dim], -2.0);
      const double fe = evaluate(xe);
      if (fe < fr) {
        x[dim] = xe;
        f[dim] = fe;
      } else {
        x[dim] = xr;
        f[dim] = fr;
      }
    } else if (fr < f[dim - 1]) {
      x[dim] = xr;
      f[dim] = fr;
    } else if (fr < f[dim]) {
      const Point xc = affine(c, xr, 0.5);
      const double fc = evaluate(xc);
      if (fc <= fr) {
        x[dim] = xc;
        f[dim] = fc;
      } else {
        shrink = true;
      }
    } else {
      const Point xc = affine(c, x[dim], 0.5);
      const double fc = evaluate(xc);
      if (fc < f[dim]) {
        x[dim] = xc;
        f[dim] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t i = 1; i <= dim; ++i) {
        x[i] = affine(x[0], x[i], 0.5);
        f[i] = evaluate(x[i]);
      }
    }
    sort();
    result.history.push_back(f[0]);
  }

  result.params = full(x[0]);
  result.energy = f[0];
  result.iterations = iter;
  result.evaluations = evaluations;
  result.converged = converged;
  return result;
}

}  // namespace lqm
