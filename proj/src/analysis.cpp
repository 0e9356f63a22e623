#include "qitc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qitc {

Eigenbasis eigenbasis(const PauliSum& h_p) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(to_dense(h_p));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<SpectralSnapshot> level_trajectory(const ControlSetup& setup,
                                               const Trajectory& traj) {
  const Eigenbasis basis = eigenbasis(setup.h_p);
  const Eigen::Index dim = basis.values.size();

  // Per-channel diagonal contributions <psi_i|H_d^k|psi_i> in the fixed
  // H_p eigenbasis; levels are then e_i + sum_k beta_k * contrib_k[i].
  std::vector<Eigen::VectorXd> control_diagonals;
  control_diagonals.reserve(setup.h_d.size());
  for (const auto& h_d : setup.h_d) {
    const Matrix dense = to_dense(h_d);
    Eigen::VectorXd diag(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      diag(i) =
          (basis.vectors.col(i).adjoint() * dense * basis.vectors.col(i))(0)
              .real();
    }
    control_diagonals.push_back(std::move(diag));
  }

  std::vector<SpectralSnapshot> snapshots;
  snapshots.reserve(traj.betas.size());
  for (int step = 0; step < traj.n_steps(); ++step) {
    SpectralSnapshot snap;
    snap.s_or_tau = traj.times[static_cast<std::size_t>(step)];
    Eigen::VectorXd levels = basis.values;
    const auto& beta = traj.betas[static_cast<std::size_t>(step)];
    for (std::size_t k = 0; k < beta.size(); ++k) {
      if (beta[k] != 0.0) levels += beta[k] * control_diagonals[k];
    }
    snap.levels.assign(levels.data(), levels.data() + levels.size());
    snap.gap_01 = levels.size() > 1 ? levels(1) - levels(0) : 0.0;
    snap.reordered = !std::is_sorted(snap.levels.begin(), snap.levels.end());
    snapshots.push_back(std::move(snap));
  }
  return snapshots;
}

double energy_rate_ite(const StateVector& psi, const PauliSum& h_p) {
  return -2.0 * energy_variance(h_p, psi);
}

double energy_rate_control(const StateVector& psi, const PauliSum& h_p,
                           const PauliSum& h_d, double beta) {
  const double d = expectation_anticommutator(h_p, h_d, psi) -
                   2.0 * expectation(h_p, psi) * expectation(h_d, psi);
  return energy_rate_ite(psi, h_p) - beta * d;
}

double energy_rate_ite_eigenbasis(const StateVector& psi,
                                  const PauliSum& h_p) {
  const Eigenbasis basis = eigenbasis(h_p);
  const Vector c = basis.vectors.adjoint() * psi.amplitudes();
  const Eigen::Index dim = c.size();
  const double e0 = basis.values(0);
  double weighted_gap = 0.0;  // sum_j |c_j|^2 Delta_j0
  for (Eigen::Index j = 0; j < dim; ++j) {
    weighted_gap += std::norm(c(j)) * (basis.values(j) - e0);
  }
  double rate = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double delta_i0 = basis.values(i) - e0;
    rate += std::norm(c(i)) * (weighted_gap * delta_i0 - delta_i0 * delta_i0);
  }
  return 2.0 * rate;
}

double energy_rate_control_eigenbasis(const StateVector& psi,
                                      const PauliSum& h_p, const PauliSum& h_d,
                                      double beta) {
  const Eigenbasis basis = eigenbasis(h_p);
  const Vector c = basis.vectors.adjoint() * psi.amplitudes();
  const Matrix d = basis.vectors.adjoint() * to_dense(h_d) * basis.vectors;
  const Eigen::Index dim = c.size();
  const double e0 = basis.values(0);

  Complex d_mean = 0.0;  // sum_jk c_j^* c_k d_jk = <H_d>
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      d_mean += std::conj(c(j)) * c(k) * d(j, k);
    }
  }
  Complex extra = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double delta_i0 = basis.values(i) - e0;
    Complex row = 2.0 * std::norm(c(i)) * d_mean;
    for (Eigen::Index j = 0; j < dim; ++j) {
      row -= std::conj(c(j)) * c(i) * d(j, i);
      row -= std::conj(c(i)) * c(j) * d(i, j);
    }
    extra += delta_i0 * row;
  }
  return energy_rate_ite_eigenbasis(psi, h_p) + beta * extra.real();
}

std::optional<int> steps_to_convergence(const Trajectory& traj,
                                        double threshold) {
  if (traj.fidelities.empty()) {
    throw MissingFidelity("trajectory carries no fidelity column");
  }
  for (std::size_t i = 0; i < traj.fidelities.size(); ++i) {
    if (traj.fidelities[i] >= threshold) return static_cast<int>(i);
  }
  return std::nullopt;
}

namespace {

struct LinearFit {
  double a = 0.0;
  double c = 0.0;
  double rms = std::numeric_limits<double>::infinity();
};

/// Least squares in (a, c) for y = a e^{b x'} + c at fixed b, x' centered.
LinearFit fit_linear_at(double b,
                        const std::vector<std::pair<double, double>>& pts,
                        double x_min) {
  const auto n = static_cast<double>(pts.size());
  double se = 0.0, see = 0.0, sy = 0.0, sey = 0.0;
  for (const auto& [x, y] : pts) {
    const double e = std::exp(b * (x - x_min));
    se += e;
    see += e * e;
    sy += y;
    sey += e * y;
  }
  const double det = n * see - se * se;
  LinearFit fit;
  if (std::abs(det) < 1e-300) return fit;
  fit.a = (n * sey - se * sy) / det;
  fit.c = (see * sy - se * sey) / det;
  double ss = 0.0;
  for (const auto& [x, y] : pts) {
    const double r = fit.a * std::exp(b * (x - x_min)) + fit.c - y;
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace

ExpFit fit_exponential(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) {
    throw FitDegenerate("exponential fit needs at least 4 points");
  }
  double x_min = points[0].first, x_max = points[0].first;
  double y_min = points[0].second, y_max = points[0].second;
  for (const auto& [x, y] : points) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  if (x_max - x_min <= 0.0) {
    throw FitDegenerate("exponential fit needs distinct x values");
  }
  if (y_max - y_min == 0.0) {
    return {0.0, 0.0, (y_max + y_min) / 2.0, 0.0};
  }
  const double x_range = x_max - x_min;

  // Signed-log grid over b: |b| * x_range spans [1e-4, 650].
  std::vector<double> candidates{0.0};
  constexpr int kGridPerSign = 400;
  const double log_lo = std::log(1e-4), log_hi = std::log(650.0);
  for (int i = 0; i < kGridPerSign; ++i) {
    const double mag =
        std::exp(log_lo + (log_hi - log_lo) * i / (kGridPerSign - 1)) /
        x_range;
    candidates.push_back(mag);
    candidates.push_back(-mag);
  }

  double best_b = 0.0;
  LinearFit best = fit_linear_at(0.0, points, x_min);
  for (double b : candidates) {
    const LinearFit fit = fit_linear_at(b, points, x_min);
    if (fit.rms < best.rms) {
      best = fit;
      best_b = b;
    }
  }

  // Golden-section refinement of b around the grid optimum.
  const double step = best_b == 0.0 ? 1e-4 / x_range : std::abs(best_b) * 0.1;
  double lo = best_b - 2.0 * step, hi = best_b + 2.0 * step;
  constexpr double kGolden = 0.6180339887498949;
  double m1 = hi - kGolden * (hi - lo);
  double m2 = lo + kGolden * (hi - lo);
  double r1 = fit_linear_at(m1, points, x_min).rms;
  double r2 = fit_linear_at(m2, points, x_min).rms;
  for (int iter = 0; iter < 200; ++iter) {
    if (r1 < r2) {
      hi = m2;
      m2 = m1;
      r2 = r1;
      m1 = hi - kGolden * (hi - lo);
      r1 = fit_linear_at(m1, points, x_min).rms;
    } else {
      lo = m1;
      m1 = m2;
      r1 = r2;
      m2 = lo + kGolden * (hi - lo);
      r2 = fit_linear_at(m2, points, x_min).rms;
    }
  }
  const double refined_b = (r1 < r2) ? m1 : m2;
  const LinearFit refined = fit_linear_at(refined_b, points, x_min);
  if (refined.rms <= best.rms) {
    best = refined;
    best_b = refined_b;
  }

  // Undo the x centering: a e^{b(x - x_min)} = (a e^{-b x_min}) e^{b x}.
  return {best.a * std::exp(-best_b * x_min), best_b, best.c, best.rms};
}

std::vector<std::pair<double, double>> gap_sweep(
    const AdiabaticFamily& fam, const std::vector<double>& s_values,
    double degeneracy_tol) {
  std::vector<std::pair<double, double>> result;
  result.reserve(s_values.size());
  for (double s : s_values) {
    const Eigenbasis basis = eigenbasis(interpolate(fam, s));
    const double e0 = basis.values(0);
    double gap = 0.0;
    for (Eigen::Index i = 1; i < basis.values.size(); ++i) {
      if (basis.values(i) > e0 + degeneracy_tol) {
        gap = basis.values(i) - e0;
        break;
      }
    }
    result.emplace_back(s, gap);
  }
  return result;
}

}  // namespace qitc
