#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qitc/evolution.hpp"
#include "qitc/lyapunov.hpp"
#include "qitc/pauli.hpp"

namespace qitc {

enum class RotationAxis { x, y, z };

enum class EntanglerPattern { chain, ring };

/// A gate is either a parameterized single-qubit rotation exp(-i theta G/2)
/// or a fixed CZ entangler.
struct Gate {
  enum class Kind { rotation, entangler } kind = Kind::rotation;
  RotationAxis axis = RotationAxis::x;
  int qubit = 0;
  int param_index = 0;
  int control = 0;
  int target = 0;

  static Gate rotation(RotationAxis axis, int qubit, int param_index) {
    Gate g;
    g.kind = Kind::rotation;
    g.axis = axis;
    g.qubit = qubit;
    g.param_index = param_index;
    return g;
  }
  static Gate cz(int control, int target) {
    Gate g;
    g.kind = Kind::entangler;
    g.control = control;
    g.target = target;
    return g;
  }
};

struct AnsatzCircuit {
  int n_qubits = 0;
  std::vector<Gate> gates;
  int n_params = 0;

  /// Per layer: one rotation per axis on every qubit, then CZ entanglers in
  /// the requested pattern. Default axes {Ry, Rz}, chain, depth 4.
  static AnsatzCircuit hardware_efficient(
      int n_qubits, int layers,
      const std::vector<RotationAxis>& axes = {RotationAxis::y,
                                               RotationAxis::z},
      EntanglerPattern entangler = EntanglerPattern::chain);
};

struct VariationalState {
  AnsatzCircuit circuit;
  Eigen::VectorXd theta;
};

struct McLachlanSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd c;
};

struct NoiseModel {
  bool enabled = false;
  double variance = 1e-4;
  std::uint64_t seed = 0;
};

/// The ansatz applied to |0...0>.
StateVector prepare_state(const VariationalState& vs);

/// Exact d|phi>/d(theta_i): sum over gates carrying parameter i of the
/// circuit with (-i G/2) inserted at that gate.
Vector derivative_state(const VariationalState& vs, int i);

/// A_ij = Re<d_i phi|d_j phi>, C_i = Re(-<d_i phi|H|phi>).
McLachlanSystem build_system(const VariationalState& vs,
                             const PauliSum& h_tau);

/// Same assembly but against an externally supplied (e.g. noise-perturbed)
/// prepared state for the C vector.
McLachlanSystem build_system(const VariationalState& vs, const PauliSum& h_tau,
                             const StateVector& measured_phi);

/// theta_dot minimizing ||A theta_dot - C||^2 + reg ||theta_dot||^2; with
/// reg = 0 the minimum-norm solution with relative eigenvalue cutoff 1e-8.
Eigen::VectorXd solve_update(const McLachlanSystem& sys, double reg);

/// Gaussian N(0, variance) perturbation of the real and imaginary part of
/// every amplitude, renormalized. A fresh draw per measured observable.
StateVector apply_measurement_noise(const StateVector& psi,
                                    const NoiseModel& noise,
                                    std::mt19937_64& rng);

/// Parameter-shift gradient dE/d(theta_i), summed over occurrences of i.
double parameter_shift_gradient(const VariationalState& vs, const PauliSum& h,
                                int i);

struct VariationalRunConfig {
  double regularization = 1e-6;
};

/// McLachlan simulation of the (optionally driven) ITE. Control decisions
/// and the C vector use noisy measurements when noise is enabled; the
/// reported energy column is the noiseless prepared-state energy and noisy
/// measured energies are logged alongside.
Trajectory run_variational_ite(const VariationalState& vs0,
                               const ControlSetup& setup,
                               const EvolutionConfig& cfg,
                               const NoiseModel& noise,
                               const TargetSpace* target = nullptr,
                               const VariationalRunConfig& run_cfg = {});

}  // namespace qitc
