#pragma once

#include <optional>
#include <vector>

#include "qitc/pauli.hpp"

namespace qitc {

enum class Integrator { euler, rk4 };

enum class ConvergenceMode { fidelity_to_target, energy_variance };

struct ConvergenceCriterion {
  ConvergenceMode mode = ConvergenceMode::fidelity_to_target;
  double threshold = 0.99;
};

struct EvolutionConfig {
  double dt = 0.01;
  int max_steps = 1000;
  Integrator integrator = Integrator::rk4;
  ConvergenceCriterion convergence;
};

/// Per-step Lyapunov record. `d` has one entry per control Hamiltonian and
/// `t = -d` is the sign convention the control laws are written in.
struct LyapunovSignals {
  double v = 0.0;       // <H_p> - E_shift
  double sigma2 = 0.0;  // <H_p>^2 - <H_p^2>, always <= 0
  std::vector<double> d;
  std::vector<double> t;
  double vdot = 0.0;  // 2*sigma2 - sum_k beta_k * d_k
  double e_shift = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<double> fidelities;          // empty when no target supplied
  std::vector<std::vector<double>> betas;  // per step, per control channel
  std::vector<LyapunovSignals> lyapunov;   // empty for undriven runs
  std::vector<double> measured_energies;   // noisy column (variational runs)
  std::optional<int> converged_step;

  int n_steps() const { return static_cast<int>(times.size()); }
};

/// Subspace against which convergence fidelity is measured. Holds an
/// orthonormal basis so degenerate ground spaces are handled uniformly.
class TargetSpace {
 public:
  explicit TargetSpace(Matrix orthonormal_columns);

  static TargetSpace single(const StateVector& target);
  /// Span of all eigenvectors within `degeneracy_tol` of the minimum
  /// eigenvalue of h (dense diagonalization).
  static TargetSpace ground_space(const PauliSum& h,
                                  double degeneracy_tol = 1e-9);

  /// Sum_k |<v_k|psi>|^2.
  double fidelity(const StateVector& psi) const;
  double fidelity(const Vector& psi) const;
  Eigen::Index dimension() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

 private:
  Matrix basis_;
};

/// One explicit-Euler step of d(psi)/dtau = -(H - E_tau) psi, renormalized.
StateVector ite_step(const StateVector& psi, const PauliSum& h, double e_tau,
                     double dt);

/// Normalized e^{-H tau}|psi0> via dense diagonalization.
StateVector ite_closed_form(const StateVector& psi0, const PauliSum& h,
                            double tau);

/// One step of d(psi)/dt = -iH psi,  renormalized afterward.
StateVector real_time_step(const StateVector& psi, const PauliSum& h,
                           double dt, Integrator integrator);

/// Undriven imaginary-time evolution under a fixed h_p.
Trajectory run_undriven_ite(const StateVector& psi0, const PauliSum& h_p,
                            const EvolutionConfig& cfg,
                            const TargetSpace* target = nullptr);

/// Energy variance <H^2> - <H>^2 of psi, via ||H psi||^2.
double energy_variance(const PauliSum& h, const StateVector& psi);

}  // namespace qitc
