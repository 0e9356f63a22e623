#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qitc/evolution.hpp"
#include "qitc/lyapunov.hpp"
#include "qitc/problems.hpp"

namespace qitc {

/// Instantaneous energies <psi_i|H(tau)|psi_i> of the fixed H_p eigenstates
/// under the driven Hamiltonian at one logged step.
struct SpectralSnapshot {
  double s_or_tau = 0.0;
  std::vector<double> levels;
  double gap_01 = 0.0;
  bool reordered = false;
};

struct SpeedupPoint {
  double gap = 0.0;
  int steps_undriven = 0;
  int steps_driven = 0;
  int delta_steps = 0;
};

/// Parameters of f(x) = a * e^{b x} + c with the RMS residual of the fit.
struct ExpFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double residual = 0.0;
};

struct Eigenbasis {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // columns
};

/// Dense Hermitian diagonalization of h_p. Ordering within a degenerate
/// block is unspecified.
Eigenbasis eigenbasis(const PauliSum& h_p);

/// Levels of H(tau) = H_p + sum_k beta_k H_d^k along a driven trajectory,
/// evaluated on the fixed eigenvectors of H_p.
std::vector<SpectralSnapshot> level_trajectory(const ControlSetup& setup,
                                               const Trajectory& traj);

/// 2(<H_p>^2 - <H_p^2>), the per-unit-dtau undriven energy rate; always <= 0.
double energy_rate_ite(const StateVector& psi, const PauliSum& h_p);

/// Undriven rate plus the control contribution
/// beta (2<H_d><H_p> - <{H_p,H_d}>).
double energy_rate_control(const StateVector& psi, const PauliSum& h_p,
                           const PauliSum& h_d, double beta);

/// Eigenbasis double-sum forms of the two rates above; the independent
/// algebraic route used for cross-checks.
double energy_rate_ite_eigenbasis(const StateVector& psi, const PauliSum& h_p);
double energy_rate_control_eigenbasis(const StateVector& psi,
                                      const PauliSum& h_p, const PauliSum& h_d,
                                      double beta);

/// First trajectory index whose fidelity meets the threshold.
std::optional<int> steps_to_convergence(const Trajectory& traj,
                                        double threshold);

/// Least-squares fit of a*e^{bx}+c: coarse signed-log grid over b, linear
/// least squares in (a, c) per candidate, then local refinement on b.
ExpFit fit_exponential(const std::vector<std::pair<double, double>>& points);

/// Gap to the first distinct level of H(s) over the given schedule points.
std::vector<std::pair<double, double>> gap_sweep(
    const AdiabaticFamily& fam, const std::vector<double>& s_values,
    double degeneracy_tol = 1e-9);

}  // namespace qitc
