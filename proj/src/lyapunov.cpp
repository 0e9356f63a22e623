#include "qitc/lyapunov.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace qitc {

namespace {

enum class TimeDomain { imaginary, real };

double checked_fidelity(const TargetSpace* target, const StateVector& psi) {
  return target ? target->fidelity(psi) : 0.0;
}

bool criterion_met(const ConvergenceCriterion& crit, const TargetSpace* target,
                   double fidelity, const PauliSum& h_p,
                   const StateVector& psi) {
  switch (crit.mode) {
    case ConvergenceMode::fidelity_to_target:
      return target != nullptr && fidelity >= crit.threshold;
    case ConvergenceMode::energy_variance:
      return energy_variance(h_p, psi) <= crit.threshold;
  }
  return false;
}

/// Signals evaluated on psi in the given time domain; for real time, D_k is
/// -<i[H_d^k, H_p]> so the descent condition stays beta_k * D_k >= 0.
LyapunovSignals raw_signals(const ControlSetup& setup, const StateVector& psi,
                            TimeDomain domain) {
  LyapunovSignals s;
  const double energy = expectation(setup.h_p, psi);
  s.e_shift = setup.e_shift;
  s.v = energy - setup.e_shift;
  s.sigma2 = -energy_variance(setup.h_p, psi);
  s.d.reserve(setup.h_d.size());
  for (const auto& h_d : setup.h_d) {
    double d_k;
    if (domain == TimeDomain::imaginary) {
      d_k = expectation_anticommutator(setup.h_p, h_d, psi) -
            2.0 * energy * expectation(h_d, psi);
    } else {
      d_k = -expectation_commutator_i(h_d, setup.h_p, psi);
    }
    s.d.push_back(d_k);
  }
  s.t.resize(s.d.size());
  for (std::size_t k = 0; k < s.d.size(); ++k) s.t[k] = -s.d[k];
  return s;
}

Trajectory run_loop(const ControlSetup& setup, const StateVector& psi0,
                    const EvolutionConfig& cfg, const TargetSpace* target,
                    TimeDomain domain) {
  const PauliSum& h_p = setup.h_p;
  const bool driven =
      !setup.h_d.empty() && setup.config.law != ControlLaw::off;

  Trajectory traj;
  StateVector psi = psi0;
  const std::vector<double> zero_beta(setup.h_d.size(), 0.0);

  for (int step = 0; step <= cfg.max_steps; ++step) {
    std::vector<double> beta = zero_beta;
    LyapunovSignals signals;
    if (driven) {
      signals = raw_signals(setup, psi, domain);
      beta = control_law(signals, setup.config);
      double control_sum = 0.0;
      for (std::size_t k = 0; k < beta.size(); ++k) {
        control_sum += beta[k] * signals.d[k];
      }
      signals.vdot = (domain == TimeDomain::imaginary)
                         ? 2.0 * signals.sigma2 - control_sum
                         : -control_sum;
    }

    traj.times.push_back(step * cfg.dt);
    traj.energies.push_back(expectation(h_p, psi));
    if (target) traj.fidelities.push_back(checked_fidelity(target, psi));
    traj.betas.push_back(beta);
    if (driven) traj.lyapunov.push_back(signals);

    if (criterion_met(cfg.convergence, target,
                      target ? traj.fidelities.back() : 0.0, h_p, psi)) {
      traj.converged_step = step;
      break;
    }
    if (step == cfg.max_steps) break;

    bool any_control = false;
    for (double b : beta) any_control |= (b != 0.0);
    if (any_control) {
      PauliSum h_tau = h_p;
      for (std::size_t k = 0; k < beta.size(); ++k) {
        if (beta[k] != 0.0) h_tau += beta[k] * setup.h_d[k];
      }
      if (domain == TimeDomain::imaginary) {
        psi = ite_step(psi, h_tau, expectation(h_tau, psi), cfg.dt);
      } else {
        psi = real_time_step(psi, h_tau, cfg.dt, cfg.integrator);
      }
    } else {
      if (domain == TimeDomain::imaginary) {
        psi = ite_step(psi, h_p, traj.energies.back(), cfg.dt);
      } else {
        psi = real_time_step(psi, h_p, cfg.dt, cfg.integrator);
      }
    }
  }
  return traj;
}

}  // namespace

ControlSetup::ControlSetup(PauliSum problem, std::vector<PauliSum> controls,
                           ControlConfig cfg)
    : ControlSetup(std::move(problem), std::move(controls), cfg, 0.0) {
  e_shift = -h_p.coefficient_l1();
}

ControlSetup::ControlSetup(PauliSum problem, std::vector<PauliSum> controls,
                           ControlConfig cfg, double shift)
    : h_p(std::move(problem)),
      h_d(std::move(controls)),
      config(cfg),
      e_shift(shift) {
  for (const auto& h : h_d) {
    if (h.n_qubits() != h_p.n_qubits()) {
      throw DimensionMismatch(
          "control Hamiltonian qubit count differs from the problem "
          "Hamiltonian");
    }
  }
}

LyapunovSignals compute_signals(const ControlSetup& setup,
                                const StateVector& psi,
                                const std::vector<double>& beta) {
  if (beta.size() != setup.h_d.size()) {
    throw DimensionMismatch("beta length does not match control count");
  }
  LyapunovSignals s = raw_signals(setup, psi, TimeDomain::imaginary);
  double control_sum = 0.0;
  for (std::size_t k = 0; k < beta.size(); ++k) {
    control_sum += beta[k] * s.d[k];
  }
  s.vdot = 2.0 * s.sigma2 - control_sum;
  return s;
}

std::vector<double> control_law(const LyapunovSignals& signals,
                                const ControlConfig& config) {
  std::vector<double> beta(signals.d.size(), 0.0);
  if (config.law == ControlLaw::off) return beta;
  const double energy_cap = std::abs(signals.v + signals.e_shift);
  for (std::size_t k = 0; k < signals.d.size(); ++k) {
    const double d_k = signals.d[k];
    if (std::abs(d_k) < config.l_threshold) continue;
    double b = 0.0;
    switch (config.law) {
      case ControlLaw::standard:
        b = config.k_gain * d_k;
        break;
      case ControlLaw::bang_bang:
        b = (d_k > 0.0) ? config.s_max : -config.s_max;
        break;
      case ControlLaw::approx_bang_bang:
        b = config.s_max * (2.0 / (1.0 + std::exp(-config.gamma * d_k)) - 1.0);
        break;
      case ControlLaw::off:
        break;
    }
    if (config.beta_cap_mode == BetaCapMode::energy_norm) {
      b = std::clamp(b, -energy_cap, energy_cap);
    }
    beta[k] = b;
  }
  return beta;
}

Trajectory run_driven_ite(const ControlSetup& setup, const StateVector& psi0,
                          const EvolutionConfig& cfg,
                          const TargetSpace* target) {
  return run_loop(setup, psi0, cfg, target, TimeDomain::imaginary);
}

Trajectory run_driven_real_time(const ControlSetup& setup,
                                const StateVector& psi0,
                                const EvolutionConfig& cfg,
                                const TargetSpace* target) {
  return run_loop(setup, psi0, cfg, target, TimeDomain::real);
}

Trajectory run_undriven_ite(const StateVector& psi0, const PauliSum& h_p,
                            const EvolutionConfig& cfg,
                            const TargetSpace* target) {
  ControlConfig off;
  off.law = ControlLaw::off;
  const ControlSetup setup(h_p, {}, off);
  return run_loop(setup, psi0, cfg, target, TimeDomain::imaginary);
}

}  // namespace qitc
