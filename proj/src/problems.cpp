#include "qitc/problems.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>

namespace qitc {

int SatInstance::violated_clauses(std::uint64_t assignment) const {
  int violated = 0;
  for (const auto& clause : clauses) {
    bool satisfied = false;
    for (const auto& lit : clause) {
      const bool bit =
          (assignment >> (n_vars - 1 - lit.variable)) & std::uint64_t{1};
      if (bit != lit.negated) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) ++violated;
  }
  return violated;
}

PauliSum compile_sat(const SatInstance& inst) {
  if (inst.n_vars < 1) {
    throw DimensionMismatch("SAT instance must declare at least one variable");
  }
  std::vector<PauliTerm> terms;
  terms.reserve(inst.clauses.size() * 8);
  for (const auto& clause : inst.clauses) {
    for (const auto& lit : clause) {
      if (lit.variable < 0 || lit.variable >= inst.n_vars) {
        throw OutOfRange("literal variable index out of range");
      }
    }
    if (clause[0].variable == clause[1].variable ||
        clause[0].variable == clause[2].variable ||
        clause[1].variable == clause[2].variable) {
      throw OutOfRange("clause variables must be distinct");
    }
    // Projector onto the single violating assignment: product over literals
    // of (I + s_v Z_v)/2 with s_v = +1 when the violating bit is 0.
    for (int subset = 0; subset < 8; ++subset) {
      std::string ops(static_cast<std::size_t>(inst.n_vars), 'I');
      double coefficient = 0.125;
      for (int j = 0; j < 3; ++j) {
        if (subset & (1 << j)) {
          ops[static_cast<std::size_t>(clause[j].variable)] = 'Z';
          if (clause[j].negated) coefficient = -coefficient;
        }
      }
      terms.push_back({coefficient, PauliString(std::move(ops))});
    }
  }
  if (terms.empty()) {
    // No clauses: the zero Hamiltonian.
    return PauliSum(inst.n_vars);
  }
  return PauliSum(inst.n_vars, std::move(terms));
}

PauliSum build_h_init(int n_qubits) {
  PauliSum h(n_qubits);
  std::vector<PauliTerm> terms;
  terms.push_back({0.5 * n_qubits,
                   PauliString(std::string(static_cast<std::size_t>(n_qubits), 'I'))});
  for (int q = 0; q < n_qubits; ++q) {
    std::string ops(static_cast<std::size_t>(n_qubits), 'I');
    ops[static_cast<std::size_t>(q)] = 'X';
    terms.push_back({-0.5, PauliString(std::move(ops))});
  }
  return PauliSum(n_qubits, std::move(terms));
}

PauliSum interpolate(const AdiabaticFamily& fam, double s) {
  if (s < 0.0 || s > 1.0) {
    throw OutOfRange("interpolation parameter must lie in [0, 1]");
  }
  if (fam.h_init.n_qubits() != fam.h_final.n_qubits()) {
    throw DimensionMismatch("adiabatic endpoints differ in qubit count");
  }
  return (1.0 - s) * fam.h_init + s * fam.h_final;
}

PauliSum long_range_ising(int n_qubits, const IsingCoupling& coupling,
                          double field) {
  if (n_qubits < 2) {
    throw DimensionMismatch("Ising model needs at least two qubits");
  }
  std::vector<PauliTerm> terms;
  for (int i = 0; i < n_qubits; ++i) {
    for (int j = i + 1; j < n_qubits; ++j) {
      double coupling_ij = coupling.j0;
      if (coupling.kind == CouplingKind::power_law) {
        coupling_ij /= std::pow(static_cast<double>(j - i), coupling.alpha);
      }
      if (coupling_ij == 0.0) continue;
      std::string ops(static_cast<std::size_t>(n_qubits), 'I');
      ops[static_cast<std::size_t>(i)] = 'Z';
      ops[static_cast<std::size_t>(j)] = 'Z';
      terms.push_back({coupling_ij, PauliString(std::move(ops))});
    }
  }
  if (field != 0.0) {
    for (int q = 0; q < n_qubits; ++q) {
      std::string ops(static_cast<std::size_t>(n_qubits), 'I');
      ops[static_cast<std::size_t>(q)] = 'X';
      terms.push_back({field, PauliString(std::move(ops))});
    }
  }
  return PauliSum(n_qubits, std::move(terms));
}

PauliSum load_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open Hamiltonian file: " + path, 0);
  }
  return parse_pauli_sum(in);
}

SatInstance parse_dimacs(std::istream& in) {
  SatInstance inst;
  int declared_clauses = -1;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::string head;
    if (!(fields >> head)) continue;
    if (head == "c") continue;
    if (head == "p") {
      std::string fmt;
      if (!(fields >> fmt >> inst.n_vars >> declared_clauses) ||
          fmt != "cnf" || inst.n_vars < 1) {
        throw ParseError("malformed DIMACS header", line_number);
      }
      continue;
    }
    if (inst.n_vars == 0) {
      throw ParseError("clause before `p cnf` header", line_number);
    }
    fields.clear();
    fields.str(line);
    Clause clause;
    int value = 0;
    for (int j = 0; j < 3; ++j) {
      if (!(fields >> value) || value == 0 ||
          std::abs(value) > inst.n_vars) {
        throw ParseError("expected three nonzero literals", line_number);
      }
      clause[static_cast<std::size_t>(j)] = {std::abs(value) - 1, value < 0};
    }
    if (!(fields >> value) || value != 0) {
      throw ParseError("clause must be terminated by 0", line_number);
    }
    inst.clauses.push_back(clause);
  }
  if (inst.n_vars == 0) {
    throw ParseError("missing `p cnf` header", line_number);
  }
  if (declared_clauses >= 0 &&
      declared_clauses != static_cast<int>(inst.clauses.size())) {
    throw ParseError("clause count does not match header", line_number);
  }
  return inst;
}

SatInstance load_dimacs(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open DIMACS file: " + path, 0);
  }
  return parse_dimacs(in);
}

SatInstance random_satisfiable_sat(int n_vars, int n_clauses,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_var(0, n_vars - 1);
  std::uniform_int_distribution<int> pick_bit(0, 1);

  std::uint64_t hidden = 0;
  for (int v = 0; v < n_vars; ++v) {
    hidden |= static_cast<std::uint64_t>(pick_bit(rng)) << (n_vars - 1 - v);
  }

  SatInstance inst;
  inst.n_vars = n_vars;
  while (static_cast<int>(inst.clauses.size()) < n_clauses) {
    Clause clause;
    int v0 = pick_var(rng);
    int v1 = pick_var(rng);
    while (v1 == v0) v1 = pick_var(rng);
    int v2 = pick_var(rng);
    while (v2 == v0 || v2 == v1) v2 = pick_var(rng);
    clause[0] = {v0, pick_bit(rng) == 1};
    clause[1] = {v1, pick_bit(rng) == 1};
    clause[2] = {v2, pick_bit(rng) == 1};
    bool satisfied = false;
    for (const auto& lit : clause) {
      const bool bit =
          (hidden >> (n_vars - 1 - lit.variable)) & std::uint64_t{1};
      if (bit != lit.negated) satisfied = true;
    }
    if (satisfied) inst.clauses.push_back(clause);
  }
  return inst;
}

}  // namespace qitc
