#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lqm/calculus.hpp"
#include "lqm/errors.hpp"
#include "lqm/propagation.hpp"
#include "oracles.hpp"

using namespace lqm;

namespace {

HamiltonianConfig trap(double omega = 1.0) {
  HamiltonianConfig cfg;
  cfg.v1 = PotentialField::analytic("harmonic", {{"omega", omega}});
  return cfg;
}

double moment2(const Wavefunction& psi) {
  const Grid& g = psi.grid();
  RealField f(static_cast<Eigen::Index>(g.n_points()));
  for (std::size_t j = 0; j < g.n_points(); ++j) f[static_cast<Eigen::Index>(j)] = g.x(j) * g.x(j) * std::norm(psi[j]);
  return integrate(g, f);
}

double mean_x(const Wavefunction& psi) {
  const Grid& g = psi.grid();
  RealField f(static_cast<Eigen::Index>(g.n_points()));
  for (std::size_t j = 0; j < g.n_points(); ++j) f[static_cast<Eigen::Index>(j)] = g.x(j) * std::norm(psi[j]);
  return integrate(g, f);
}

Wavefunction packet(const Grid& g, double x0, double sigma, double k) {
  return normalize(Wavefunction::sample(g, [=](double x) {
    return std::polar(std::exp(-(x - x0) * (x - x0) / (4 * sigma * sigma)), k * x);
  }));
}

double distance(const Wavefunction& a, const Wavefunction& b) { return norm(a - b); }

}  // namespace

TEST_CASE("plan validation and names") {
  HamiltonianConfig cfg = trap();
  PropagationPlan plan;
  CHECK_NOTHROW(plan.validate(cfg));
  plan.dt = 0;
  CHECK_THROWS_AS(plan.validate(cfg), InvalidArgument);
  plan = {};
  plan.record_stride = 0;
  CHECK_THROWS_AS(plan.validate(cfg), InvalidArgument);
  plan = {};
  plan.nonlinear_update = NonlinearUpdate::predictor_corrector;
  CHECK_THROWS_AS(plan.validate(cfg), InvalidArgument);
  cfg.interaction = TwoBodyInteraction::contact(1.0, 2);
  CHECK_NOTHROW(plan.validate(cfg));
  plan.nonlinear_update = NonlinearUpdate::none;
  CHECK_THROWS_AS(plan.validate(cfg), InvalidArgument);

  for (auto s : {Scheme::crank_nicolson, Scheme::split_operator}) CHECK(scheme_from_string(to_string(s)) == s);
  for (auto u : {NonlinearUpdate::none, NonlinearUpdate::recompute_each_half_step,
                 NonlinearUpdate::predictor_corrector}) {
    CHECK(nonlinear_update_from_string(to_string(u)) == u);
  }
  CHECK_THROWS_AS(scheme_from_string("euler"), InvalidArgument);
}

TEST_CASE("trajectory ordering") {
  const Grid g(-1, 1, 11, Boundary::dirichlet);
  Trajectory traj(2);
  traj.append(Wavefunction::zeros(g, 0.0));
  traj.append(Wavefunction::zeros(g, 0.5));
  CHECK_THROWS_AS(traj.append(Wavefunction::zeros(g, 0.5)), InvalidArgument);
  CHECK_THROWS_AS(traj.append(Wavefunction::zeros(Grid(-1, 1, 12, Boundary::dirichlet), 1.0)), GridMismatch);
  CHECK(traj.size() == 2);
  CHECK(traj.times() == std::vector<double>{0.0, 0.5});
}

TEST_CASE("crank-nicolson steps are unitary") {
  for (Boundary b : {Boundary::dirichlet, Boundary::periodic}) {
    const Grid g(-6, 6, 120, b);
    HamiltonianConfig cfg;
    cfg.v1 = PotentialField::analytic("quartic", {{"lambda", 0.1}});
    cfg.a0 = PotentialField::callable([](double x, double t) { return 0.3 * x * std::cos(2 * t); });
    cfg.a_vec = PotentialField::callable([](double x, double t) { return std::sin(x + t); });
    Wavefunction psi = oracle::random_smooth(g, 40);
    double t = 0;
    for (int s = 0; s < 20; ++s) {
      psi = step_crank_nicolson(cfg, psi, t, 0.05);
      t += 0.05;
      CHECK(std::abs(norm(psi) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("stationary state acquires a global phase") {
  const Grid g(-10, 10, 401, Boundary::dirichlet);
  const auto gs = ground_state_imaginary_time(trap(), packet(g, 0.3, 1.2, 0), 0.05, 1e-13);
  REQUIRE(gs.converged);
  const double dt = 0.01;
  const auto next = step_crank_nicolson(trap(), gs.state, 0, dt);
  const Complex phase = std::polar(1.0, -0.5 * dt);
  double worst = 0;
  for (std::size_t j = 0; j < g.n_points(); ++j) worst = std::max(worst, std::abs(next[j] - phase * gs.state[j]));
  CHECK(worst < 1e-6);
}

TEST_CASE("free packet spreads as predicted") {
  const Grid g(-20, 20, 801, Boundary::dirichlet);
  const double sigma0 = 1.0;
  PropagationPlan plan;
  plan.dt = 1e-3;
  plan.n_steps = 1000;
  plan.record_stride = 1000;
  const auto traj = propagate(HamiltonianConfig{}, packet(g, 0, sigma0, 0), plan);
  REQUIRE(traj.size() == 2);
  const double t = traj[1].time();
  const double expected = sigma0 * sigma0 * (1 + std::pow(t / (2 * sigma0 * sigma0), 2));
  CHECK(std::abs(moment2(traj[1]) - expected) / expected < 1e-3);
}

TEST_CASE("crank-nicolson is second order in time") {
  const Grid g(-10, 10, 201, Boundary::dirichlet);
  HamiltonianConfig cfg = trap();
  cfg.a0 = PotentialField::callable([](double x, double t) { return 0.2 * x * std::sin(3 * t); });
  const auto psi0 = packet(g, 1.0, 0.8, 1.5);
  auto run = [&](double dt) {
    PropagationPlan plan;
    plan.dt = dt;
    plan.n_steps = static_cast<std::size_t>(std::lround(0.8 / dt));
    plan.record_stride = plan.n_steps;
    return propagate(cfg, psi0, plan)[1];
  };
  const auto a = run(0.02), b = run(0.01), c = run(0.005);
  const double order = std::log2(distance(a, b) / distance(b, c));
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("propagate bookkeeping") {
  const Grid g(-10, 10, 201, Boundary::dirichlet);
  const auto psi0 = packet(g, 1.0, 1.0, 0.5);

  SUBCASE("zero steps") {
    PropagationPlan plan;
    plan.n_steps = 0;
    plan.t_start = 2.5;
    const auto traj = propagate(trap(), psi0, plan);
    REQUIRE(traj.size() == 1);
    CHECK(traj[0].time() == 2.5);
    CHECK(traj[0].amplitudes() == psi0.amplitudes());
  }
  SUBCASE("stride and norm drift") {
    PropagationPlan plan;
    plan.n_steps = 1000;
    plan.dt = 1e-3;
    plan.record_stride = 250;
    const auto traj = propagate(trap(), psi0, plan);
    REQUIRE(traj.size() == 5);
    CHECK(traj[4].time() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(norm_squared(traj[4]) - 1.0) < 1e-10);
  }
  SUBCASE("stride that does not divide the step count") {
    PropagationPlan plan;
    plan.n_steps = 10;
    plan.record_stride = 4;
    CHECK(propagate(trap(), psi0, plan).size() == 3);
  }
  SUBCASE("observers see every step") {
    PropagationPlan plan;
    plan.n_steps = 7;
    plan.dt = 0.01;
    std::size_t calls = 0;
    double last_time = 0;
    bool chained = true;
    Complex prev_first{};
    auto obs = [&](const StepView& v) {
      ++calls;
      CHECK(v.step == calls);
      last_time = v.time;
      if (calls > 1) chained = chained && (v.before[100] == prev_first);
      prev_first = v.after[100];
    };
    const auto traj = propagate(trap(), psi0, plan, {obs});
    CHECK(calls == 7);
    CHECK(last_time == doctest::Approx(0.07));
    CHECK(chained);
    CHECK(traj[7].amplitudes() == propagate(trap(), psi0, plan)[7].amplitudes());
  }
  SUBCASE("observer failure carries context") {
    PropagationPlan plan;
    plan.n_steps = 10;
    plan.dt = 0.1;
    auto obs = [](const StepView& v) {
      if (v.step == 4) throw std::runtime_error("boom");
    };
    try {
      propagate(trap(), psi0, plan, {obs});
      FAIL("expected PropagationError");
    } catch (const PropagationError& e) {
      CHECK(e.step() == 4);
      CHECK(e.time() == doctest::Approx(0.4));
      CHECK(std::string(e.what()).find("boom") != std::string::npos);
    }
  }
  SUBCASE("initial state must be normalized") {
    CHECK_THROWS_AS(propagate(trap(), 2.0 * psi0, PropagationPlan{}), InvalidArgument);
  }
}

TEST_CASE("static energy is conserved") {
  const Grid g(-10, 10, 201, Boundary::dirichlet);
  HamiltonianConfig cfg = trap();
  cfg.a_vec = PotentialField::callable([](double x, double) { return 0.3 * std::sin(x); }, false);
  const auto psi0 = packet(g, 2.0, 0.9, 0.7);
  PropagationPlan plan;
  plan.n_steps = 10000;
  plan.dt = 1e-3;
  plan.record_stride = 10000;
  const auto traj = propagate(cfg, psi0, plan);
  const double e0 = energy(cfg, traj[0], 0), e1 = energy(cfg, traj[1], 10);
  CHECK(std::abs(e1 - e0) / std::abs(e0) < 1e-8);
}

TEST_CASE("driven system obeys the power balance") {
  // dE/dt = <psi, dH/dt psi> = q cos(t) <x>.
  const Grid g(-10, 10, 401, Boundary::dirichlet);
  HamiltonianConfig cfg = trap();
  cfg.a0 = PotentialField::callable([](double x, double t) { return x * std::sin(t); });
  const auto psi0 = packet(g, 0.5, 1 / std::sqrt(2.0), 0);
  PropagationPlan plan;
  plan.n_steps = 2000;
  plan.dt = 1e-3;
  const auto traj = propagate(cfg, psi0, plan);
  const double e_start = energy(cfg, traj[0], traj[0].time());
  const double e_end = energy(cfg, traj[2000], traj[2000].time());
  CHECK(std::abs(e_end - e_start) > 0.1);
  double worst = 0;
  for (std::size_t k = 100; k < 2000; k += 100) {
    const double d = 1e-3;
    const double de = (energy(cfg, traj[k + 1], traj[k + 1].time()) - energy(cfg, traj[k - 1], traj[k - 1].time())) / (2 * d);
    worst = std::max(worst, std::abs(de - std::cos(traj[k].time()) * mean_x(traj[k])));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("mean-field stepping") {
  const Grid g(-12, 12, 241, Boundary::dirichlet);
  HamiltonianConfig cfg = trap();
  const auto psi0 = packet(g, 0.5, 1.0, 0.3);

  SUBCASE("zero coupling reduces to the linear step") {
    cfg.interaction = TwoBodyInteraction::contact(0.0, 10);
    for (auto u : {NonlinearUpdate::predictor_corrector, NonlinearUpdate::recompute_each_half_step}) {
      PropagationPlan plan;
      plan.nonlinear_update = u;
      const auto a = step_gp(cfg, psi0, 0.3, 0.01, plan);
      const auto b = step_crank_nicolson(trap(), psi0, 0.3, 0.01);
      CHECK(a.amplitudes() == b.amplitudes());
    }
  }

  cfg.interaction = TwoBodyInteraction::contact(50.0 / 99.0, 100);
  const auto gs = ground_state_imaginary_time(cfg, psi0, 0.01, 1e-12);
  REQUIRE(gs.converged);

  SUBCASE("per-step norm") {
    for (auto u : {NonlinearUpdate::predictor_corrector, NonlinearUpdate::recompute_each_half_step}) {
      PropagationPlan plan;
      plan.nonlinear_update = u;
      auto psi = packet(g, 1.0, 1.5, 0.5);
      for (int s = 0; s < 10; ++s) {
        const auto next = step_gp(cfg, psi, s * 0.01, 0.01, plan);
        CHECK(std::abs(norm(next) - norm(psi)) < 1e-10);
        psi = next;
      }
    }
  }
  SUBCASE("ground state density is stationary") {
    PropagationPlan plan;
    plan.nonlinear_update = NonlinearUpdate::predictor_corrector;
    plan.n_steps = 500;
    plan.dt = 1e-3;
    plan.record_stride = 500;
    const auto traj = propagate(cfg, gs.state, plan);
    const RealField d = traj[1].amplitudes().cwiseAbs2() - traj[0].amplitudes().cwiseAbs2();
    CHECK(d.cwiseAbs().maxCoeff() < 1e-5);
  }
  SUBCASE("energy is conserved") {
    PropagationPlan plan;
    plan.nonlinear_update = NonlinearUpdate::predictor_corrector;
    plan.n_steps = 10000;
    plan.dt = 1e-3;
    plan.record_stride = 10000;
    // Ground state shifted by two grid cells.
    ComplexField a = ComplexField::Zero(241);
    for (Eigen::Index j = 2; j < 240; ++j) a[j] = gs.state.amplitudes()[j - 2];
    const auto start = normalize(Wavefunction(g, a));
    const auto traj = propagate(cfg, start, plan);
    const double e0 = energy(cfg, traj[0], 0), e1 = energy(cfg, traj[1], 10);
    CHECK(std::abs(e1 - e0) / e0 < 1e-6);
  }
  SUBCASE("trap quench excites a breathing mode") {
    HamiltonianConfig quenched = cfg;
    quenched.v1 = PotentialField::analytic("harmonic", {{"omega", 0.99}});
    PropagationPlan plan;
    plan.nonlinear_update = NonlinearUpdate::predictor_corrector;
    plan.n_steps = 1000;
    plan.dt = 5e-3;
    plan.record_stride = 10;
    const auto traj = propagate(quenched, gs.state, plan);
    std::vector<double> w;
    for (const auto& s : traj.snapshots()) w.push_back(moment2(s));
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    CHECK((*hi - *lo) / w.front() > 5e-3);
    // Rises, then turns back.
    CHECK(hi - w.begin() > 0);
    CHECK(hi - w.begin() < static_cast<long>(w.size()) - 1);
    CHECK(std::abs(norm_squared(traj.snapshots().back()) - 1.0) < 1e-9);
  }
}

TEST_CASE("split-operator scheme") {
  const Grid p(0, 2 * M_PI, 64, Boundary::periodic);
  HamiltonianConfig cfg;
  cfg.a_vec = PotentialField::analytic("constant", {{"value", 0.4}});

  SUBCASE("plane waves rotate by the kinetic symbol") {
    const auto wave = normalize(Wavefunction::sample(p, [](double x) { return std::polar(1.0, 3 * x); }));
    const auto h_wave = apply_hamiltonian(cfg, wave, 0);
    const Complex e = inner_product(wave, h_wave);
    const auto next = step_split_operator(cfg, wave, 0, 0.1);
    CHECK(oracle::max_abs(next.amplitudes() - std::polar(1.0, -e.real() * 0.1) * wave.amplitudes()) < 1e-12);
  }
  SUBCASE("agrees with crank-nicolson to second order") {
    const Grid g(-15, 15, 256, Boundary::periodic);
    HamiltonianConfig c = cfg;
    c.v1 = PotentialField::analytic("harmonic");
    const auto psi0 = packet(g, 1.0, 1.0, 0.5);
    auto run = [&](Scheme s, double dt) {
      PropagationPlan plan;
      plan.scheme = s;
      plan.dt = dt;
      plan.n_steps = static_cast<std::size_t>(std::lround(0.5 / dt));
      plan.record_stride = plan.n_steps;
      return propagate(c, psi0, plan)[1];
    };
    const double d1 = distance(run(Scheme::split_operator, 0.02), run(Scheme::crank_nicolson, 0.02));
    const double d2 = distance(run(Scheme::split_operator, 0.01), run(Scheme::crank_nicolson, 0.01));
    CHECK(d1 < 1e-2);
    CHECK(std::log2(d1 / d2) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::abs(norm(run(Scheme::split_operator, 0.01)) - 1) < 1e-12);
  }
  SUBCASE("restrictions") {
    const Grid d(0, 1, 32, Boundary::dirichlet);
    CHECK_THROWS_AS(step_split_operator(HamiltonianConfig{}, packet(d, 0.5, 0.1, 0), 0, 0.01), InvalidArgument);
    HamiltonianConfig c;
    c.a_vec = PotentialField::callable([](double x, double) { return std::sin(x); }, false);
    CHECK_THROWS_AS(step_split_operator(c, packet(p, 3, 0.5, 0), 0, 0.01), InvalidArgument);
  }
}

TEST_CASE("imaginary-time ground states") {
  SUBCASE("harmonic trap") {
    const Grid g(-10, 10, 401, Boundary::dirichlet);
    const auto r = ground_state_imaginary_time(trap(), oracle::random_smooth(g, 9));
    REQUIRE(r.converged);
    CHECK(std::abs(r.energy - 0.5) < 1e-6);
    CHECK(r.residual < 1e-9);
    CHECK(r.energy_history.size() == r.iterations + 1);
    for (std::size_t k = 1; k < r.energy_history.size(); ++k) {
      CHECK(r.energy_history[k] <= r.energy_history[k - 1] + 1e-12);
    }
    const auto n = r.energy_history.size();
    CHECK(std::abs(r.energy_history[n - 1] - r.energy_history[n - 2]) < 1e-10);
    CHECK(std::abs(norm(r.state) - 1) < 1e-12);
  }
  SUBCASE("agrees with the dense eigensolver") {
    const Grid g(-5, 5, 81, Boundary::dirichlet);
    HamiltonianConfig cfg;
    cfg.v1 = PotentialField::analytic("quartic", {{"lambda", 1.0}});
    const auto r = ground_state_imaginary_time(cfg, oracle::random_smooth(g, 3), 0.05, 1e-12);
    REQUIRE(r.converged);
    CHECK(std::abs(r.energy - oracle::ground_energy(g, cfg.v1.sample(g, 0))) < 1e-10);
  }
  SUBCASE("particle in a box") {
    const Grid g(0, 1, 2001, Boundary::dirichlet);
    const auto start = Wavefunction::sample(g, [](double x) { return Complex(x * (1 - x) * (1 + x), 0); });
    const auto r = ground_state_imaginary_time(HamiltonianConfig{}, normalize(start));
    REQUIRE(r.converged);
    CHECK(std::abs(r.energy - M_PI * M_PI / 2) < 1e-3);
  }
  SUBCASE("mean-field trap approaches the Thomas-Fermi limit") {
    const Grid g(-12, 12, 481, Boundary::dirichlet);
    HamiltonianConfig cfg = trap();
    cfg.interaction = TwoBodyInteraction::contact(50.0 / 99.0, 100);
    const auto r = ground_state_imaginary_time(cfg, packet(g, 0, 2, 0), 0.01, 1e-10);
    REQUIRE(r.converged);
    // mu = V(x) + (N-1) g rho on the support, normalized rho integrates to 1.
    const double mu_tf = std::pow(3 * 50.0 / (4 * std::sqrt(2.0)), 2.0 / 3.0);
    CHECK(std::abs(r.chemical_potential - mu_tf) / mu_tf < 0.02);
    CHECK(r.energy < r.chemical_potential);
    CHECK(r.residual < 1e-9);
  }
  SUBCASE("iteration cap") {
    const Grid g(-10, 10, 201, Boundary::dirichlet);
    const auto r = ground_state_imaginary_time(trap(), packet(g, 2, 1, 0), 0.05, 1e-10, 1);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 1);
    CHECK(r.energy_history.size() == 2);
    CHECK(r.energy_history[1] < r.energy_history[0]);
  }
  SUBCASE("time-dependent potentials are rejected") {
    const Grid g(-10, 10, 201, Boundary::dirichlet);
    HamiltonianConfig cfg = trap();
    cfg.a0 = PotentialField::callable([](double x, double t) { return x * t; });
    CHECK_THROWS_AS(ground_state_imaginary_time(cfg, packet(g, 0, 1, 0)), InvalidArgument);
  }
}
