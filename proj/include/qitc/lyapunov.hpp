#pragma once

#include <vector>

#include "qitc/evolution.hpp"
#include "qitc/pauli.hpp"

namespace qitc {

enum class ControlLaw { standard, bang_bang, approx_bang_bang, off };

enum class BetaCapMode { none, energy_norm };

struct ControlConfig {
  ControlLaw law = ControlLaw::standard;
  double k_gain = 1.0;
  double s_max = 1.0;
  double gamma = 10.0;
  double l_threshold = 1e-3;
  BetaCapMode beta_cap_mode = BetaCapMode::energy_norm;
};

/// Problem Hamiltonian, control Hamiltonians, control law, and the constant
/// shift making P = H_p - E_shift positive semidefinite.
struct ControlSetup {
  PauliSum h_p;
  std::vector<PauliSum> h_d;
  ControlConfig config;
  double e_shift;

  /// E_shift defaults to -(l1 norm of coefficients), a certified spectral
  /// lower bound that needs no diagonalization.
  ControlSetup(PauliSum problem, std::vector<PauliSum> controls,
               ControlConfig cfg);
  ControlSetup(PauliSum problem, std::vector<PauliSum> controls,
               ControlConfig cfg, double shift);
};

/// Evaluates V, sigma^2, D_k, T_k = -D_k, and the predicted
/// Vdot = 2 sigma^2 - sum_k beta_k D_k for the betas in force.
LyapunovSignals compute_signals(const ControlSetup& setup,
                                const StateVector& psi,
                                const std::vector<double>& beta);

/// Per-channel control field from the current signals. All laws are gated to
/// zero when |D_k| < L and guarantee beta_k * D_k >= 0.
std::vector<double> control_law(const LyapunovSignals& signals,
                                const ControlConfig& config);

/// Driven imaginary-time evolution under H(tau) = H_p + sum_k beta_k H_d^k
/// with zero-delay feedback.
Trajectory run_driven_ite(const ControlSetup& setup, const StateVector& psi0,
                          const EvolutionConfig& cfg,
                          const TargetSpace* target = nullptr);

/// Driven real-time evolution; the descent signal is T_k = <i[H_d^k, H_p]>
/// and the laws act on D_k = -T_k so that Vdot_real <= 0.
Trajectory run_driven_real_time(const ControlSetup& setup,
                                const StateVector& psi0,
                                const EvolutionConfig& cfg,
                                const TargetSpace* target = nullptr);

}  // namespace qitc
