#include "qitc/controllability.hpp"

#include <cmath>

namespace qitc {

namespace {

constexpr double kRankTol = 1e-9;

Complex trace(const Matrix& m) { return m.trace(); }

/// Traceless skew-Hermitian seed i(H - tr(H)/N), Frobenius-normalized.
/// Returns a zero matrix when H is proportional to the identity.
Matrix seed_generator(const PauliSum& h) {
  Matrix m = to_dense(h);
  const auto dim = m.rows();
  m -= (trace(m) / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
  m *= Complex(0.0, 1.0);
  const double norm = m.norm();
  if (norm > 0.0) m /= norm;
  return m;
}

double real_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace().real();
}

}  // namespace

ControllabilityReport lie_closure(const PauliSum& h_p,
                                  const std::vector<PauliSum>& h_ds,
                                  int max_dim) {
  if (h_p.n_qubits() > kDenseQubitLimit) {
    throw DimensionTooLarge("Lie closure requires a dense realization");
  }
  const auto dim_hilbert = static_cast<int>(h_p.dimension());
  const int full = dim_hilbert * dim_hilbert - 1;
  if (max_dim < 0) max_dim = dim_hilbert * dim_hilbert;

  ControllabilityReport report;
  report.full_dimension = full;
  report.full_dimension_u = dim_hilbert * dim_hilbert;
  report.generators_used = 1 + static_cast<int>(h_ds.size());

  // Orthonormal basis of the generated real vector space of traceless
  // skew-Hermitian matrices, under the inner product Re tr(A^dag B).
  std::vector<Matrix> basis;
  const auto try_add = [&](Matrix candidate) -> bool {
    // Two Gram-Schmidt passes for numerically stable rank decisions.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        candidate -= real_inner(b, candidate) * b;
      }
    }
    const double norm = candidate.norm();
    if (norm <= kRankTol) return false;
    candidate /= norm;
    basis.push_back(std::move(candidate));
    return true;
  };

  try_add(seed_generator(h_p));
  for (const auto& h_d : h_ds) {
    if (h_d.n_qubits() != h_p.n_qubits()) {
      throw DimensionMismatch("control qubit count differs from problem");
    }
    try_add(seed_generator(h_d));
  }

  // Grow by commutators; each sweep only pairs with at least one new member.
  std::size_t frontier_start = 0;
  while (static_cast<int>(basis.size()) < max_dim) {
    const std::size_t old_size = basis.size();
    bool added = false;
    for (std::size_t i = 0; i < old_size; ++i) {
      const std::size_t j_begin = std::max(i + 1, frontier_start);
      for (std::size_t j = j_begin; j < old_size; ++j) {
        Matrix comm = basis[i] * basis[j] - basis[j] * basis[i];
        const double norm = comm.norm();
        if (norm <= kRankTol) continue;
        comm /= norm;
        if (try_add(std::move(comm))) {
          added = true;
          if (static_cast<int>(basis.size()) >= max_dim) break;
        }
      }
      if (static_cast<int>(basis.size()) >= max_dim) break;
    }
    frontier_start = old_size;
    if (!added) break;
  }

  report.lie_dimension = static_cast<int>(basis.size());
  report.truncated = static_cast<int>(basis.size()) >= max_dim &&
                     report.lie_dimension < full;
  report.classification = report.lie_dimension >= full
                              ? Controllability::complete
                              : Controllability::incomplete;
  return report;
}

std::vector<bool> commutes_with_terms(const PauliSum& h_d,
                                      const PauliSum& h_p) {
  std::vector<bool> result;
  result.reserve(h_p.terms().size());
  for (const auto& term : h_p.terms()) {
    bool all_commute = true;
    for (const auto& control_term : h_d.terms()) {
      if (!control_term.string.commutes_with(term.string)) {
        all_commute = false;
        break;
      }
    }
    result.push_back(all_commute);
  }
  return result;
}

}  // namespace qitc
