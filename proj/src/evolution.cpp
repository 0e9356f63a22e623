#include "qitc/evolution.hpp"

#include <cmath>

namespace qitc {

TargetSpace::TargetSpace(Matrix orthonormal_columns)
    : basis_(std::move(orthonormal_columns)) {
  if (basis_.cols() < 1) {
    throw DimensionMismatch("target space needs at least one basis vector");
  }
}

TargetSpace TargetSpace::single(const StateVector& target) {
  return TargetSpace(target.amplitudes());
}

TargetSpace TargetSpace::ground_space(const PauliSum& h,
                                      double degeneracy_tol) {
  const Matrix dense = to_dense(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dense);
  const auto& values = solver.eigenvalues();
  const double e0 = values(0);
  Eigen::Index count = 0;
  while (count < values.size() && values(count) <= e0 + degeneracy_tol) {
    ++count;
  }
  return TargetSpace(solver.eigenvectors().leftCols(count));
}

double TargetSpace::fidelity(const Vector& psi) const {
  return (basis_.adjoint() * psi).squaredNorm();
}

double TargetSpace::fidelity(const StateVector& psi) const {
  return fidelity(psi.amplitudes());
}

StateVector ite_step(const StateVector& psi, const PauliSum& h, double e_tau,
                     double dt) {
  Vector next =
      psi.amplitudes() - dt * (apply(h, psi) - e_tau * psi.amplitudes());
  if (!next.allFinite()) {
    throw NonFiniteError(
        "imaginary-time step produced non-finite amplitudes; "
        "dt is too large relative to the Hamiltonian norm, try halving dt");
  }
  return StateVector(std::move(next));
}

StateVector ite_closed_form(const StateVector& psi0, const PauliSum& h,
                            double tau) {
  if (tau < 0.0) {
    throw OutOfRange("imaginary time must be nonnegative");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(to_dense(h));
  const auto& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();
  Vector coeffs = vectors.adjoint() * psi0.amplitudes();
  // Shift by e_min so the exponentials stay bounded; the shift cancels in
  // normalization.
  const double e_min = values(0);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    coeffs(i) *= std::exp(-(values(i) - e_min) * tau);
  }
  return StateVector(vectors * coeffs);
}

StateVector real_time_step(const StateVector& psi, const PauliSum& h,
                           double dt, Integrator integrator) {
  const Complex minus_i(0.0, -1.0);
  const auto deriv = [&](const Vector& v) -> Vector {
    return minus_i * apply(h, v);
  };
  const Vector& v = psi.amplitudes();
  Vector next;
  if (integrator == Integrator::euler) {
    next = v + dt * deriv(v);
  } else {
    const Vector k1 = deriv(v);
    const Vector k2 = deriv(v + (0.5 * dt) * k1);
    const Vector k3 = deriv(v + (0.5 * dt) * k2);
    const Vector k4 = deriv(v + dt * k3);
    next = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!next.allFinite()) {
    throw NonFiniteError(
        "real-time step produced non-finite amplitudes; try halving dt");
  }
  return StateVector(std::move(next));
}

double energy_variance(const PauliSum& h, const StateVector& psi) {
  const Vector hpsi = apply(h, psi);
  const double e = psi.amplitudes().dot(hpsi).real();
  return hpsi.squaredNorm() - e * e;
}

}  // namespace qitc
