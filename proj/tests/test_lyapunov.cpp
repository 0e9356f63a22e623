#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qitc/lyapunov.hpp"

using namespace qitc;

namespace {

PauliSum single(const std::string& ops, double coeff = 1.0) {
  PauliSum h(static_cast<int>(ops.size()));
  h.add_term(coeff, ops);
  return h;
}

StateVector plus_state() {
  Vector v(2);
  v << 1.0, 1.0;
  return StateVector(v);
}

StateVector random_state(int n_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(Eigen::Index{1} << n_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = Complex(gauss(rng), gauss(rng));
  }
  return StateVector(std::move(v));
}

PauliSum random_sum(int n_qubits, int n_terms, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick_op(0, 3);
  std::uniform_real_distribution<double> pick_coeff(-1.0, 1.0);
  const char kOps[] = "IXYZ";
  std::vector<PauliTerm> terms;
  for (int t = 0; t < n_terms; ++t) {
    std::string ops(static_cast<std::size_t>(n_qubits), 'I');
    for (auto& c : ops) c = kOps[pick_op(rng)];
    terms.push_back({pick_coeff(rng), PauliString(ops)});
  }
  return PauliSum(n_qubits, std::move(terms));
}

}  // namespace

TEST_CASE("signals on a Z eigenstate vanish except V") {
  ControlConfig cfg;
  const ControlSetup setup(single("Z"), {single("X")}, cfg, -1.0);
  const LyapunovSignals s =
      compute_signals(setup, StateVector::basis_state(1, 1), {0.0});
  CHECK(s.v == doctest::Approx(0.0).epsilon(1e-14));       // E - E_shift = 0
  CHECK(s.sigma2 == doctest::Approx(0.0).epsilon(1e-14));  // eigenstate
  CHECK(s.d[0] == doctest::Approx(0.0).epsilon(1e-14));    // <{Z,X}> = 0
  CHECK(s.vdot == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("signals on |+> under H_p = Z") {
  ControlConfig cfg;
  const ControlSetup setup(single("Z"), {single("X")}, cfg, -1.0);
  const LyapunovSignals s = compute_signals(setup, plus_state(), {0.0});
  CHECK(s.v == doctest::Approx(1.0));        // <Z> = 0, shift -1
  CHECK(s.sigma2 == doctest::Approx(-1.0));  // 0 - <Z^2> = -1
  // D = <{Z,X}> - 2<Z><X> = 0 - 0 = 0 on |+>.
  CHECK(s.d[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(s.t[0] == doctest::Approx(-s.d[0]));
  CHECK(s.vdot == doctest::Approx(2.0 * s.sigma2));
}

TEST_CASE("D against the dense covariance oracle") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const PauliSum h_p = random_sum(3, 5, rng);
    const PauliSum h_d = random_sum(3, 3, rng);
    const StateVector psi = random_state(3, rng);
    ControlConfig cfg;
    const ControlSetup setup(h_p, {h_d}, cfg);
    const LyapunovSignals s = compute_signals(setup, psi, {0.0});

    const Matrix a = to_dense(h_p);
    const Matrix b = to_dense(h_d);
    const Vector v = psi.amplitudes();
    const double anti = (v.adjoint() * (a * b + b * a) * v).real()(0, 0);
    const double ea = (v.adjoint() * a * v).real()(0, 0);
    const double eb = (v.adjoint() * b * v).real()(0, 0);
    CHECK(s.d[0] == doctest::Approx(anti - 2.0 * ea * eb).epsilon(1e-10));
  }
}

TEST_CASE("H_d = H_p makes D twice the variance (so D >= 0)") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const PauliSum h_p = random_sum(3, 5, rng);
    const StateVector psi = random_state(3, rng);
    ControlConfig cfg;
    const ControlSetup setup(h_p, {h_p}, cfg);
    const LyapunovSignals s = compute_signals(setup, psi, {0.0});
    // D = 2<H_p^2> - 2<H_p>^2 = -2 sigma^2.
    CHECK(s.d[0] == doctest::Approx(-2.0 * s.sigma2).epsilon(1e-10));
    CHECK(s.d[0] >= -1e-10);
  }
}

TEST_CASE("sigma^2 is never positive") {
  std::mt19937_64 rng(11);
  ControlConfig cfg;
  for (int rep = 0; rep < 100; ++rep) {
    const ControlSetup setup(random_sum(3, 5, rng), {}, cfg);
    const LyapunovSignals s =
        compute_signals(setup, random_state(3, rng), {});
    CHECK(s.sigma2 <= 1e-12);
  }
}

TEST_CASE("default shift is the negative coefficient l1 norm") {
  PauliSum h_p(2);
  h_p.add_term(0.5, "ZZ");
  h_p.add_term(-1.5, "XI");
  ControlConfig cfg;
  const ControlSetup setup(h_p, {}, cfg);
  CHECK(setup.e_shift == doctest::Approx(-2.0));
}

TEST_CASE("control laws: values, gate, and sign agreement") {
  ControlConfig cfg;
  cfg.k_gain = 2.0;
  cfg.s_max = 3.0;
  cfg.gamma = 10.0;
  cfg.l_threshold = 1e-3;
  cfg.beta_cap_mode = BetaCapMode::none;

  LyapunovSignals s;
  s.d = {0.5, -0.5, 1e-4};
  s.t = {-0.5, 0.5, -1e-4};

  cfg.law = ControlLaw::standard;
  auto beta = control_law(s, cfg);
  CHECK(beta[0] == doctest::Approx(1.0));   // K * D
  CHECK(beta[1] == doctest::Approx(-1.0));
  CHECK(beta[2] == 0.0);                    // gated

  cfg.law = ControlLaw::bang_bang;
  beta = control_law(s, cfg);
  CHECK(beta[0] == doctest::Approx(3.0));
  CHECK(beta[1] == doctest::Approx(-3.0));
  CHECK(beta[2] == 0.0);

  cfg.law = ControlLaw::approx_bang_bang;
  beta = control_law(s, cfg);
  CHECK(beta[0] ==
        doctest::Approx(3.0 * (2.0 / (1.0 + std::exp(-10.0 * 0.5)) - 1.0)));
  CHECK(beta[1] == doctest::Approx(-beta[0]));
  CHECK(beta[2] == 0.0);

  cfg.law = ControlLaw::off;
  beta = control_law(s, cfg);
  CHECK(beta == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("beta * D >= 0 holds for every law on random signals") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pick_d(-2.0, 2.0);
  for (const ControlLaw law : {ControlLaw::standard, ControlLaw::bang_bang,
                               ControlLaw::approx_bang_bang}) {
    ControlConfig cfg;
    cfg.law = law;
    cfg.beta_cap_mode = BetaCapMode::none;
    for (int rep = 0; rep < 1000; ++rep) {
      LyapunovSignals s;
      s.d = {pick_d(rng)};
      s.t = {-s.d[0]};
      const auto beta = control_law(s, cfg);
      CHECK(beta[0] * s.d[0] >= 0.0);
    }
  }
}

TEST_CASE("energy-norm cap clips beta to |<H_p>|") {
  ControlConfig cfg;
  cfg.law = ControlLaw::standard;
  cfg.k_gain = 100.0;
  cfg.beta_cap_mode = BetaCapMode::energy_norm;
  LyapunovSignals s;
  s.d = {1.0, -1.0};
  s.t = {-1.0, 1.0};
  s.e_shift = -2.0;
  s.v = 1.5;  // <H_p> = V + E_shift = -0.5
  const auto beta = control_law(s, cfg);
  CHECK(beta[0] == doctest::Approx(0.5));
  CHECK(beta[1] == doctest::Approx(-0.5));
}

TEST_CASE("law off reproduces the undriven trajectory bitwise") {
  std::mt19937_64 rng(23);
  const PauliSum h_p = random_sum(3, 6, rng);
  const StateVector psi0 = random_state(3, rng);
  EvolutionConfig evo;
  evo.max_steps = 200;

  ControlConfig cfg;
  cfg.law = ControlLaw::off;
  const ControlSetup setup(h_p, {random_sum(3, 2, rng)}, cfg);
  const TargetSpace target = TargetSpace::ground_space(h_p);

  const Trajectory driven = run_driven_ite(setup, psi0, evo, &target);
  const Trajectory plain = run_undriven_ite(psi0, h_p, evo, &target);

  REQUIRE(driven.energies.size() == plain.energies.size());
  for (std::size_t i = 0; i < plain.energies.size(); ++i) {
    CHECK(driven.energies[i] == plain.energies[i]);
    CHECK(driven.fidelities[i] == plain.fidelities[i]);
  }
  for (const auto& beta : driven.betas) {
    for (double b : beta) CHECK(b == 0.0);
  }
}

TEST_CASE("driven descent: recorded Vdot <= 0 and V decreases accordingly") {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 10; ++rep) {
    const PauliSum h_p = random_sum(3, 5, rng);
    std::vector<PauliSum> h_d = {random_sum(3, 2, rng), random_sum(3, 2, rng)};
    ControlConfig cfg;
    const ControlSetup setup(h_p, std::move(h_d), cfg);
    EvolutionConfig evo;
    evo.dt = 0.002;
    evo.max_steps = 300;
    const Trajectory traj = run_driven_ite(setup, random_state(3, rng), evo);
    for (std::size_t i = 0; i + 1 < traj.lyapunov.size(); ++i) {
      CHECK(traj.lyapunov[i].vdot <= 1e-12);
      const double dv = traj.lyapunov[i + 1].v - traj.lyapunov[i].v;
      // Explicit Euler: the step error in V is O(dt^2).
      CHECK(std::abs(dv - traj.lyapunov[i].vdot * evo.dt) <= 1e-4);
    }
  }
}

TEST_CASE("driving beats undriven ITE from a near-orthogonal start") {
  // H_p = Z from a state heavily weighted on the excited |0>; the X control
  // opens a faster path to |1>.
  const PauliSum h_p = single("Z");
  Vector v(2);
  v << 100.0, 1.0;
  const StateVector psi0{v};
  EvolutionConfig evo;
  evo.dt = 0.01;
  evo.max_steps = 5000;
  const TargetSpace target = TargetSpace::single(StateVector::basis_state(1, 1));

  ControlConfig cfg;
  const ControlSetup setup(h_p, {single("X")}, cfg);
  const Trajectory driven = run_driven_ite(setup, psi0, evo, &target);
  const Trajectory plain = run_undriven_ite(psi0, h_p, evo, &target);

  REQUIRE(driven.converged_step.has_value());
  REQUIRE(plain.converged_step.has_value());
  CHECK(*driven.converged_step < *plain.converged_step);
}

TEST_CASE("real-time descent signal against the dense commutator oracle") {
  std::mt19937_64 rng(31);
  const PauliSum h_p = random_sum(3, 5, rng);
  const PauliSum h_d = random_sum(3, 3, rng);
  const StateVector psi = random_state(3, rng);

  const Matrix a = to_dense(h_d);
  const Matrix b = to_dense(h_p);
  const Vector vec = psi.amplitudes();
  const Complex comm =
      (vec.adjoint() * (Complex(0, 1) * (a * b - b * a)) * vec)(0, 0);
  CHECK(expectation_commutator_i(h_d, h_p, psi) ==
        doctest::Approx(comm.real()).epsilon(1e-10));
}

TEST_CASE("driven real time converges where free evolution cannot") {
  // Real-time evolution under H_p alone never changes populations; the
  // feedback-controlled X drive steers the state toward the ground state of
  // Z. The start carries a complex phase so the descent signal <Y> is
  // nonzero from the first step.
  const PauliSum h_p = single("Z");
  ControlConfig cfg;
  cfg.law = ControlLaw::standard;
  cfg.k_gain = 2.0;
  const ControlSetup setup(h_p, {single("X")}, cfg);
  EvolutionConfig evo;
  evo.dt = 0.01;
  evo.max_steps = 20000;
  const TargetSpace target = TargetSpace::single(StateVector::basis_state(1, 1));
  Vector v(2);
  v << Complex(1.0, 0.0), Complex(0.5, 0.5);
  const Trajectory traj =
      run_driven_real_time(setup, StateVector(v), evo, &target);
  CHECK(traj.converged_step.has_value());
  // V is nonincreasing up to the O(dt^2) overshoot of the zero-delay
  // discrete feedback.
  for (std::size_t i = 1; i < traj.lyapunov.size(); ++i) {
    CHECK(traj.lyapunov[i].v <= traj.lyapunov[i - 1].v + 1e-4);
  }
  CHECK(traj.lyapunov.back().v < 0.1 * traj.lyapunov.front().v);
}
