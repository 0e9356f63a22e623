#include "qitc/variational.hpp"

#include <cmath>
#include <numbers>

namespace qitc {

namespace {

int bit_position(int n_qubits, int qubit) { return n_qubits - 1 - qubit; }

void apply_rotation(Vector& v, int n_qubits, RotationAxis axis, int qubit,
                    double theta) {
  const std::uint64_t stride = std::uint64_t{1} << bit_position(n_qubits, qubit);
  const auto dim = static_cast<std::uint64_t>(v.size());
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex expm(c, -s), expp(c, s);
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (b & stride) continue;
    const auto i0 = static_cast<Eigen::Index>(b);
    const auto i1 = static_cast<Eigen::Index>(b | stride);
    const Complex a0 = v(i0), a1 = v(i1);
    switch (axis) {
      case RotationAxis::x:
        v(i0) = c * a0 - Complex(0.0, s) * a1;
        v(i1) = -Complex(0.0, s) * a0 + c * a1;
        break;
      case RotationAxis::y:
        v(i0) = c * a0 - s * a1;
        v(i1) = s * a0 + c * a1;
        break;
      case RotationAxis::z:
        v(i0) = expm * a0;
        v(i1) = expp * a1;
        break;
    }
  }
}

void apply_cz(Vector& v, int n_qubits, int control, int target) {
  const std::uint64_t mask =
      (std::uint64_t{1} << bit_position(n_qubits, control)) |
      (std::uint64_t{1} << bit_position(n_qubits, target));
  const auto dim = static_cast<std::uint64_t>(v.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    if ((b & mask) == mask) v(static_cast<Eigen::Index>(b)) = -v(static_cast<Eigen::Index>(b));
  }
}

/// Multiplies by (-i G/2) for the rotation generator G at one qubit.
void apply_half_generator(Vector& v, int n_qubits, RotationAxis axis,
                          int qubit) {
  const std::uint64_t stride = std::uint64_t{1} << bit_position(n_qubits, qubit);
  const auto dim = static_cast<std::uint64_t>(v.size());
  const Complex factor(0.0, -0.5);
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (b & stride) continue;
    const auto i0 = static_cast<Eigen::Index>(b);
    const auto i1 = static_cast<Eigen::Index>(b | stride);
    const Complex a0 = v(i0), a1 = v(i1);
    switch (axis) {
      case RotationAxis::x:
        v(i0) = factor * a1;
        v(i1) = factor * a0;
        break;
      case RotationAxis::y:
        v(i0) = factor * Complex(0.0, -1.0) * a1;
        v(i1) = factor * Complex(0.0, 1.0) * a0;
        break;
      case RotationAxis::z:
        v(i0) = factor * a0;
        v(i1) = -factor * a1;
        break;
    }
  }
}

void apply_gate(Vector& v, int n_qubits, const Gate& gate, double theta) {
  if (gate.kind == Gate::Kind::rotation) {
    apply_rotation(v, n_qubits, gate.axis, gate.qubit, theta);
  } else {
    apply_cz(v, n_qubits, gate.control, gate.target);
  }
}

double gate_angle(const VariationalState& vs, const Gate& gate) {
  return gate.kind == Gate::Kind::rotation ? vs.theta(gate.param_index) : 0.0;
}

/// Runs the circuit with an angle offset applied at a single gate index.
Vector run_circuit(const VariationalState& vs, int offset_gate = -1,
                   double offset = 0.0) {
  Vector v = Vector::Zero(Eigen::Index{1} << vs.circuit.n_qubits);
  v(0) = 1.0;
  for (std::size_t g = 0; g < vs.circuit.gates.size(); ++g) {
    const Gate& gate = vs.circuit.gates[g];
    double theta = gate_angle(vs, gate);
    if (static_cast<int>(g) == offset_gate) theta += offset;
    apply_gate(v, vs.circuit.n_qubits, gate, theta);
  }
  return v;
}

void validate(const VariationalState& vs) {
  if (vs.theta.size() != vs.circuit.n_params) {
    throw DimensionMismatch("theta length does not match parameter count");
  }
}

}  // namespace

AnsatzCircuit AnsatzCircuit::hardware_efficient(
    int n_qubits, int layers, const std::vector<RotationAxis>& axes,
    EntanglerPattern entangler) {
  AnsatzCircuit circuit;
  circuit.n_qubits = n_qubits;
  int param = 0;
  for (int layer = 0; layer < layers; ++layer) {
    for (RotationAxis axis : axes) {
      for (int q = 0; q < n_qubits; ++q) {
        circuit.gates.push_back(Gate::rotation(axis, q, param++));
      }
    }
    if (n_qubits > 1) {
      for (int q = 0; q + 1 < n_qubits; ++q) {
        circuit.gates.push_back(Gate::cz(q, q + 1));
      }
      if (entangler == EntanglerPattern::ring && n_qubits > 2) {
        circuit.gates.push_back(Gate::cz(n_qubits - 1, 0));
      }
    }
  }
  circuit.n_params = param;
  return circuit;
}

StateVector prepare_state(const VariationalState& vs) {
  validate(vs);
  return StateVector(run_circuit(vs));
}

Vector derivative_state(const VariationalState& vs, int i) {
  validate(vs);
  if (i < 0 || i >= vs.circuit.n_params) {
    throw IndexOutOfRange("parameter index out of range");
  }
  Vector total = Vector::Zero(Eigen::Index{1} << vs.circuit.n_qubits);
  for (std::size_t occurrence = 0; occurrence < vs.circuit.gates.size();
       ++occurrence) {
    const Gate& marked = vs.circuit.gates[occurrence];
    if (marked.kind != Gate::Kind::rotation || marked.param_index != i) {
      continue;
    }
    Vector v = Vector::Zero(total.size());
    v(0) = 1.0;
    for (std::size_t g = 0; g < vs.circuit.gates.size(); ++g) {
      const Gate& gate = vs.circuit.gates[g];
      apply_gate(v, vs.circuit.n_qubits, gate, gate_angle(vs, gate));
      if (g == occurrence) {
        apply_half_generator(v, vs.circuit.n_qubits, gate.axis, gate.qubit);
      }
    }
    total += v;
  }
  return total;
}

McLachlanSystem build_system(const VariationalState& vs,
                             const PauliSum& h_tau) {
  return build_system(vs, h_tau, prepare_state(vs));
}

McLachlanSystem build_system(const VariationalState& vs, const PauliSum& h_tau,
                             const StateVector& measured_phi) {
  validate(vs);
  if (h_tau.n_qubits() != vs.circuit.n_qubits) {
    throw DimensionMismatch("Hamiltonian qubit count differs from the ansatz");
  }
  const int n = vs.circuit.n_params;
  std::vector<Vector> derivatives;
  derivatives.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    derivatives.push_back(derivative_state(vs, i));
  }
  const Vector h_phi = apply(h_tau, measured_phi.amplitudes());

  McLachlanSystem sys;
  sys.a.resize(n, n);
  sys.c.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double value = derivatives[static_cast<std::size_t>(i)]
                               .dot(derivatives[static_cast<std::size_t>(j)])
                               .real();
      sys.a(i, j) = value;
      sys.a(j, i) = value;
    }
    sys.c(i) = -derivatives[static_cast<std::size_t>(i)].dot(h_phi).real();
  }
  return sys;
}

Eigen::VectorXd solve_update(const McLachlanSystem& sys, double reg) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sys.a);
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const Eigen::VectorXd projected = vectors.transpose() * sys.c;
  Eigen::VectorXd scaled(values.size());
  if (reg > 0.0) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      scaled(i) = projected(i) * values(i) /
                  (values(i) * values(i) + reg);
    }
  } else {
    const double cutoff = 1e-8 * values.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      scaled(i) =
          std::abs(values(i)) > cutoff ? projected(i) / values(i) : 0.0;
    }
  }
  return vectors * scaled;
}

StateVector apply_measurement_noise(const StateVector& psi,
                                    const NoiseModel& noise,
                                    std::mt19937_64& rng) {
  if (!noise.enabled || noise.variance == 0.0) return psi;
  std::normal_distribution<double> gauss(0.0, std::sqrt(noise.variance));
  Vector perturbed = psi.amplitudes();
  for (Eigen::Index i = 0; i < perturbed.size(); ++i) {
    perturbed(i) += Complex(gauss(rng), gauss(rng));
  }
  return StateVector(std::move(perturbed));
}

double parameter_shift_gradient(const VariationalState& vs, const PauliSum& h,
                                int i) {
  validate(vs);
  if (i < 0 || i >= vs.circuit.n_params) {
    throw IndexOutOfRange("parameter index out of range");
  }
  constexpr double kShift = std::numbers::pi / 2.0;
  double gradient = 0.0;
  for (std::size_t g = 0; g < vs.circuit.gates.size(); ++g) {
    const Gate& gate = vs.circuit.gates[g];
    if (gate.kind != Gate::Kind::rotation || gate.param_index != i) continue;
    const StateVector plus(run_circuit(vs, static_cast<int>(g), kShift));
    const StateVector minus(run_circuit(vs, static_cast<int>(g), -kShift));
    gradient += (expectation(h, plus) - expectation(h, minus)) / 2.0;
  }
  return gradient;
}

Trajectory run_variational_ite(const VariationalState& vs0,
                               const ControlSetup& setup,
                               const EvolutionConfig& cfg,
                               const NoiseModel& noise,
                               const TargetSpace* target,
                               const VariationalRunConfig& run_cfg) {
  validate(vs0);
  VariationalState vs = vs0;
  std::mt19937_64 rng(noise.seed);
  const bool driven =
      !setup.h_d.empty() && setup.config.law != ControlLaw::off;

  // One fresh noise draw per measured observable, in a fixed order so runs
  // with the same seed are bit-reproducible.
  const auto measure_state = [&](const StateVector& phi) {
    return apply_measurement_noise(phi, noise, rng);
  };

  Trajectory traj;
  for (int step = 0; step <= cfg.max_steps; ++step) {
    const StateVector phi = prepare_state(vs);
    const double energy = expectation(setup.h_p, phi);

    const double e_measured = expectation(setup.h_p, measure_state(phi));
    std::vector<double> beta(setup.h_d.size(), 0.0);
    LyapunovSignals signals;
    if (driven) {
      signals.e_shift = setup.e_shift;
      signals.v = e_measured - setup.e_shift;
      signals.sigma2 =
          e_measured * e_measured -
          apply(setup.h_p, measure_state(phi)).squaredNorm();
      for (const auto& h_d : setup.h_d) {
        const double anticomm =
            expectation_anticommutator(setup.h_p, h_d, measure_state(phi));
        const double d_mean = expectation(h_d, measure_state(phi));
        signals.d.push_back(anticomm - 2.0 * e_measured * d_mean);
      }
      signals.t.resize(signals.d.size());
      for (std::size_t k = 0; k < signals.d.size(); ++k) {
        signals.t[k] = -signals.d[k];
      }
      beta = control_law(signals, setup.config);
      signals.vdot = 2.0 * signals.sigma2;
      for (std::size_t k = 0; k < beta.size(); ++k) {
        signals.vdot -= beta[k] * signals.d[k];
      }
    }

    traj.times.push_back(step * cfg.dt);
    traj.energies.push_back(energy);
    traj.measured_energies.push_back(e_measured);
    if (target) traj.fidelities.push_back(target->fidelity(phi));
    traj.betas.push_back(beta);
    if (driven) traj.lyapunov.push_back(signals);

    if (target && cfg.convergence.mode == ConvergenceMode::fidelity_to_target &&
        traj.fidelities.back() >= cfg.convergence.threshold) {
      traj.converged_step = step;
      break;
    }
    if (cfg.convergence.mode == ConvergenceMode::energy_variance &&
        energy_variance(setup.h_p, phi) <= cfg.convergence.threshold) {
      traj.converged_step = step;
      break;
    }
    if (step == cfg.max_steps) break;

    PauliSum h_tau = setup.h_p;
    for (std::size_t k = 0; k < beta.size(); ++k) {
      if (beta[k] != 0.0) h_tau += beta[k] * setup.h_d[k];
    }
    const McLachlanSystem sys =
        build_system(vs, h_tau, measure_state(phi));
    const Eigen::VectorXd theta_dot =
        solve_update(sys, run_cfg.regularization);
    vs.theta += cfg.dt * theta_dot;
    if (!vs.theta.allFinite()) {
      throw NonFiniteError("variational update produced non-finite theta");
    }
  }
  return traj;
}

}  // namespace qitc
