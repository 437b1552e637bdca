#include <doctest.h>

#include <cmath>

#include "lqm/calculus.hpp"
#include "lqm/diagnostics.hpp"
#include "lqm/errors.hpp"
#include "lqm/propagation.hpp"
#include "lqm/variational.hpp"
#include "oracles.hpp"

using namespace lqm;

namespace {

HamiltonianConfig trap() {
  HamiltonianConfig cfg;
  cfg.v1 = PotentialField::analytic("harmonic");
  return cfg;
}

Wavefunction packet(const Grid& g, double x0, double sigma, double k) {
  return normalize(Wavefunction::sample(g, [=](double x) {
    return std::polar(std::exp(-(x - x0) * (x - x0) / (4 * sigma * sigma)), k * x);
  }));
}

Wavefunction ho_ground(const Grid& g) {
  return Wavefunction::sample(g, [](double x) { return Complex(std::exp(-x * x / 2) / std::pow(M_PI, 0.25), 0); });
}

Wavefunction advance(const HamiltonianConfig& cfg, const Wavefunction& psi, double span, std::size_t substeps) {
  PropagationPlan plan;
  plan.t_start = psi.time();
  plan.dt = span / static_cast<double>(substeps);
  plan.n_steps = substeps;
  plan.record_stride = substeps;
  return propagate(cfg, psi, plan)[1];
}

}  // namespace

TEST_CASE("probability density and current") {
  SUBCASE("real states carry no current") {
    const Grid g(-8, 8, 161, Boundary::dirichlet);
    const auto f = probability_fields(trap(), packet(g, 0.3, 1.0, 0), 0.4);
    CHECK(f.current.cwiseAbs().maxCoeff() == 0.0);
    CHECK(f.rho.minCoeff() >= 0.0);
    CHECK(std::abs(integrate(g, f.rho) - 1.0) < 1e-10);
    CHECK(f.time == 0.4);
  }
  SUBCASE("plane wave on a ring") {
    const double l = 2 * M_PI, k = 5;
    const Grid g(0, l, 48, Boundary::periodic);
    HamiltonianConfig cfg;
    cfg.constants.hbar = 1.2;
    cfg.constants.mass = 0.8;
    const auto wave = Wavefunction::sample(g, [&](double x) { return std::polar(1 / std::sqrt(l), k * x); });
    const auto f = probability_fields(cfg, wave, 0);
    const double keff = std::sin(k * g.dx()) / g.dx();
    const double expected = 1.2 * keff / (0.8 * l);
    CHECK((f.current.array() - expected).abs().maxCoeff() < 1e-13);
  }
  SUBCASE("uniform vector potential") {
    const Grid g(-8, 8, 161, Boundary::dirichlet);
    HamiltonianConfig cfg;
    cfg.constants.charge = 1.5;
    cfg.constants.mass = 2.0;
    cfg.a_vec = PotentialField::analytic("constant", {{"value", 0.6}});
    const auto psi = packet(g, 0, 1.2, 0);
    const auto f = probability_fields(cfg, psi, 0);
    double worst = 0;
    for (Eigen::Index j = 1; j + 1 < f.current.size(); ++j) {
      worst = std::max(worst, std::abs(f.current[j] + 1.5 * 0.6 / 2.0 * std::norm(psi.amplitudes()[j])));
    }
    CHECK(worst < 1e-15);
    CHECK(f.current[0] == 0.0);
    CHECK(f.current[160] == 0.0);
  }
  SUBCASE("integrated current is the mean velocity") {
    for (Boundary b : {Boundary::dirichlet, Boundary::periodic}) {
      const Grid g(-6, 6, 90, b);
      HamiltonianConfig cfg;
      cfg.constants.mass = 1.7;
      cfg.constants.charge = -0.9;
      cfg.a_vec = PotentialField::callable([](double x, double) { return 0.3 + 0.2 * std::sin(x); }, false);
      const Wavefunction psi(g, oracle::random_field(90, 8));
      const double total = integrate(g, probability_fields(cfg, psi, 0).current);
      const ComplexField v = oracle::momentum_matrix(g, cfg.a_vec.sample(g, 0), 1.0, -0.9) * psi.amplitudes() / 1.7;
      const double expected = oracle::inner(g, psi.amplitudes(), v).real();
      CHECK(std::abs(total - expected) < 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("continuity residual") {
  SUBCASE("stationary state") {
    const Grid g(-10, 10, 401, Boundary::dirichlet);
    const auto gs = ground_state_imaginary_time(trap(), packet(g, 0.2, 1.0, 0), 0.05, 1e-13);
    const auto after = step_crank_nicolson(trap(), gs.state, 0, 0.01).at_time(0.01);
    const auto r = continuity_residual(trap(), gs.state, after);
    CHECK(r.sup_norm < 1e-6);
    CHECK(r.dt_used == doctest::Approx(0.01));
  }
  SUBCASE("second-order convergence") {
    auto l2 = [](std::size_t n, double dt) {
      const Grid g(-10, 10, n, Boundary::dirichlet);
      const auto psi0 = packet(g, -1, 1, 2);
      const auto after = step_crank_nicolson(trap(), psi0, 0, dt).at_time(dt);
      return continuity_residual(trap(), psi0, after).l2_norm;
    };
    const double coarse = l2(201, 0.01), fine = l2(401, 0.005);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.125));
  }
  SUBCASE("norms are consistent with the residual") {
    const Grid g(-10, 10, 201, Boundary::dirichlet);
    const auto psi0 = packet(g, -1, 1, 2);
    const auto r = continuity_residual(trap(), psi0, step_crank_nicolson(trap(), psi0, 0, 0.01).at_time(0.01));
    CHECK(r.sup_norm == r.residual.cwiseAbs().maxCoeff());
    CHECK(r.l2_norm == doctest::Approx(std::sqrt(integrate(g, RealField(r.residual.cwiseAbs2())))).epsilon(1e-14));
    CHECK(r.residual[0] == 0.0);
  }
  SUBCASE("corrupted snapshot is detected") {
    const Grid g(-10, 10, 201, Boundary::dirichlet);
    const auto psi0 = packet(g, -1, 1, 2);
    const auto after = step_crank_nicolson(trap(), psi0, 0, 0.01).at_time(0.01);
    const double clean = continuity_residual(trap(), psi0, after).sup_norm;
    const double bad = continuity_residual(trap(), psi0, Complex(1.01, 0) * after).sup_norm;
    CHECK(bad > 100 * clean);
  }
  SUBCASE("norm change is bounded by the boundary flux") {
    const Grid g(-10, 10, 201, Boundary::dirichlet);
    const auto psi0 = packet(g, -1, 1, 2);
    const auto after = step_crank_nicolson(trap(), psi0, 0, 0.01).at_time(0.01);
    CHECK(std::abs(norm_squared(after) - norm_squared(psi0)) / 0.01 < 1e-10);
  }
  SUBCASE("identical times") {
    const Grid g(-10, 10, 201, Boundary::dirichlet);
    const auto psi0 = packet(g, -1, 1, 2);
    CHECK_THROWS_AS(continuity_residual(trap(), psi0, psi0), InvalidArgument);
  }
}

TEST_CASE("canonical fields") {
  SUBCASE("oscillator ground state") {
    const Grid g(-10, 10, 2001, Boundary::dirichlet);
    const auto psi = ho_ground(g);
    const auto c = canonical_fields(trap(), psi, 0);
    CHECK(std::abs(c.hamiltonian_functional - 0.5) < 1e-6);
    CHECK(oracle::max_abs(c.pi - Complex(0, 1) * psi.amplitudes().conjugate()) == 0.0);
  }
  SUBCASE("agrees with the energy on random states") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Grid g(-6, 6, 121, Boundary::dirichlet);
      HamiltonianConfig cfg = trap();
      cfg.constants.hbar = 0.6;
      cfg.a_vec = PotentialField::callable([](double x, double) { return 0.5 * std::cos(x); }, false);
      if (seed % 2) cfg.interaction = TwoBodyInteraction::contact(1.3, 8);
      const auto psi = oracle::random_smooth(g, seed);
      CHECK(std::abs(canonical_fields(cfg, psi, 0).hamiltonian_functional - energy(cfg, psi, 0)) < 1e-12);
    }
  }
  SUBCASE("plane wave on a ring") {
    const double l = 2 * M_PI, k = 3;
    const Grid g(0, l, 40, Boundary::periodic);
    const auto wave = Wavefunction::sample(g, [&](double x) { return std::polar(1 / std::sqrt(l), k * x); });
    const double h = g.dx();
    const double symbol =
        0.5 * ((4.0 / 3.0) * (2 - 2 * std::cos(k * h)) - (1.0 / 12.0) * (2 - 2 * std::cos(2 * k * h))) / (h * h);
    CHECK(std::abs(canonical_fields(HamiltonianConfig{}, wave, 0).hamiltonian_functional - symbol) < 1e-10);
  }
}

TEST_CASE("hamilton equations residual") {
  const Grid g(-10, 10, 201, Boundary::dirichlet);
  SUBCASE("consecutive solver steps") {
    const auto psi0 = ho_ground(g);
    const auto next = step_crank_nicolson(trap(), psi0, 0, 1e-3).at_time(1e-3);
    const auto r = hamilton_equations_residual(trap(), psi0, next);
    CHECK(r.r1 < 1e-5);
  }
  SUBCASE("second order in the snapshot spacing") {
    HamiltonianConfig cfg = trap();
    cfg.a0 = PotentialField::callable([](double x, double t) { return 0.2 * x * std::cos(t); });
    const auto psi0 = packet(g, 1.0, 0.8, 1.0);
    auto r1 = [&](double span) {
      // Fine internal steps so the snapshots follow the exact evolution.
      return hamilton_equations_residual(cfg, psi0, advance(cfg, psi0, span, 16)).r1;
    };
    const double a = r1(0.02), b = r1(0.01);
    CHECK(a / b == doctest::Approx(4.0).epsilon(0.125));
  }
  SUBCASE("both equations give the same residual") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Wavefunction a(g, oracle::random_field(201, seed), 0.0);
      const Wavefunction b(g, oracle::random_field(201, seed + 9), 0.1);
      const auto r = hamilton_equations_residual(trap(), a, b);
      CHECK(std::abs(r.r2 - r.r1) <= 1e-14 * r.r1);
    }
  }
  SUBCASE("identical times") {
    CHECK_THROWS_AS(hamilton_equations_residual(trap(), ho_ground(g), ho_ground(g)), InvalidArgument);
  }
}

TEST_CASE("global gauge transformation") {
  const Grid g(-6, 6, 121, Boundary::dirichlet);
  const auto psi = oracle::random_smooth(g, 17);
  CHECK(gauge_transform(psi, 0.0, 1.0).amplitudes() == psi.amplitudes());
  CHECK(oracle::max_abs(gauge_transform(psi, M_PI * 0.7, 0.7).amplitudes() + psi.amplitudes()) < 1e-15);
  CHECK_THROWS_AS(gauge_transform(psi, 1.0, 0.0), InvalidArgument);

  HamiltonianConfig cfg = trap();
  cfg.a_vec = PotentialField::callable([](double x, double) { return 0.3 * x; }, false);
  cfg.interaction = TwoBodyInteraction::contact(0.7, 5);
  const auto moved = gauge_transform(psi, 0.37, 1.0);
  CHECK(std::abs(norm(moved) - norm(psi)) < 1e-15);
  CHECK(std::abs(energy(cfg, moved, 0) - energy(cfg, psi, 0)) < 1e-13);
  const auto f0 = probability_fields(cfg, psi, 0), f1 = probability_fields(cfg, moved, 0);
  CHECK((f1.rho - f0.rho).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((f1.current - f0.current).cwiseAbs().maxCoeff() < 1e-12);
  const auto rate = Wavefunction(g, oracle::random_field(121, 3));
  const auto l0 = lagrangian_densities(cfg, psi, rate, 0);
  const auto l1 = lagrangian_densities(cfg, moved, gauge_transform(rate, 0.37, 1.0), 0);
  CHECK(oracle::max_abs(l1.l_simple - l0.l_simple) < 1e-12);
}

TEST_CASE("diagnostics leave their inputs untouched") {
  const Grid g(-6, 6, 121, Boundary::dirichlet);
  const auto a = oracle::random_smooth(g, 1);
  const auto b = step_crank_nicolson(trap(), a, 0, 0.01).at_time(0.01);
  const ComplexField ca = a.amplitudes(), cb = b.amplitudes();
  (void)probability_fields(trap(), a, 0);
  (void)continuity_residual(trap(), a, b);
  (void)canonical_fields(trap(), a, 0);
  (void)hamilton_equations_residual(trap(), a, b);
  (void)gauge_transform(a, 0.2, 1.0);
  CHECK(a.amplitudes() == ca);
  CHECK(b.amplitudes() == cb);
  CHECK(a.time() == 0.0);
}
