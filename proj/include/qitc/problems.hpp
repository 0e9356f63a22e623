#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qitc/pauli.hpp"

namespace qitc {

struct Literal {
  int variable = 0;
  bool negated = false;
};

using Clause = std::array<Literal, 3>;

struct SatInstance {
  int n_vars = 0;
  std::vector<Clause> clauses;

  /// Number of clauses violated by the bitstring `assignment`, where bit
  /// (n_vars-1-v) holds variable v (matching the basis-index convention).
  int violated_clauses(std::uint64_t assignment) const;
};

struct AdiabaticFamily {
  PauliSum h_init;
  PauliSum h_final;
};

/// H_final = sum over clauses of the projector onto the unique violating
/// assignment, expanded symbolically into Pauli strings. Eigenvalues count
/// violated clauses; ground energy is 0 iff the instance is satisfiable.
PauliSum compile_sat(const SatInstance& inst);

/// (1/2) sum_i (I - X_i); ground state is the uniform superposition at
/// eigenvalue 0.
PauliSum build_h_init(int n_qubits);

/// Coefficient-wise blend (1-s) h_init + s h_final, s in [0,1].
PauliSum interpolate(const AdiabaticFamily& fam, double s);

enum class CouplingKind { uniform, power_law };

struct IsingCoupling {
  CouplingKind kind = CouplingKind::uniform;
  double j0 = 1.0;
  double alpha = 1.0;  // power-law exponent, used when kind == power_law
};

/// sum_{i<j} J(i,j) Z_i Z_j + field * sum_i X_i.
PauliSum long_range_ising(int n_qubits, const IsingCoupling& coupling,
                          double field);

/// Loads a Pauli-sum text file (see parse_pauli_sum for the format).
PauliSum load_hamiltonian(const std::string& path);

/// DIMACS CNF subset: `p cnf <vars> <clauses>` header, `c` comment lines,
/// clause lines of exactly three nonzero literals terminated by 0.
SatInstance parse_dimacs(std::istream& in);
SatInstance load_dimacs(const std::string& path);

/// Seeded random 3-SAT instance guaranteed satisfiable: clauses are drawn
/// at the requested count and resampled until a hidden random assignment
/// satisfies them.
SatInstance random_satisfiable_sat(int n_vars, int n_clauses,
                                   std::uint64_t seed);

}  // namespace qitc
