#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qitc/errors.hpp"

namespace qitc {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Largest qubit count for which dense 2^n x 2^n realizations are permitted.
inline constexpr int kDenseQubitLimit = 12;

/// Tensor product of single-qubit Pauli operators, e.g. "ZIIX".
///
/// Index 0 of the string is the leftmost tensor factor and maps to the
/// most-significant bit of a computational-basis index.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::string ops);

  int n_qubits() const { return static_cast<int>(ops_.size()); }
  const std::string& ops() const { return ops_; }
  char op(int qubit) const { return ops_[static_cast<std::size_t>(qubit)]; }

  /// Basis-index bits flipped by this string (X and Y sites).
  std::uint64_t x_mask() const { return x_mask_; }
  /// Basis-index bits contributing a (-1) phase (Z and Y sites).
  std::uint64_t zy_mask() const { return zy_mask_; }
  int y_count() const { return y_count_; }

  bool is_identity() const { return x_mask_ == 0 && zy_mask_ == 0; }

  /// Two Pauli strings commute iff they anticommute on an even number of
  /// sites.
  bool commutes_with(const PauliString& other) const;

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.ops_ == b.ops_;
  }
  friend auto operator<=>(const PauliString& a, const PauliString& b) {
    return a.ops_ <=> b.ops_;
  }

 private:
  std::string ops_;
  std::uint64_t x_mask_ = 0;
  std::uint64_t zy_mask_ = 0;
  int y_count_ = 0;
};

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

/// Real-weighted sum of Pauli strings on a fixed qubit count. Hermitian by
/// construction. Canonical form keeps terms sorted with duplicates merged.
class PauliSum {
 public:
  explicit PauliSum(int n_qubits);
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  void add_term(double coefficient, const std::string& ops);
  void add_term(double coefficient, PauliString string);
  void canonicalize();

  int n_qubits() const { return n_qubits_; }
  std::uint64_t dimension() const { return std::uint64_t{1} << n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  /// Sum of |coefficient|; an upper bound on the operator norm.
  double coefficient_l1() const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator*=(double scale);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator*(double s, PauliSum a) { return a *= s; }

 private:
  int n_qubits_;
  std::vector<PauliTerm> terms_;
};

/// Normalized complex amplitude vector over 2^n computational basis states.
class StateVector {
 public:
  explicit StateVector(Vector amplitudes);

  static StateVector zero_state(int n_qubits);
  static StateVector basis_state(int n_qubits, std::uint64_t index);

  int n_qubits() const { return n_qubits_; }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  int n_qubits_;
  Vector amplitudes_;
};

/// Dense 2^n x 2^n realization. Throws DimensionTooLarge above the limit.
Matrix to_dense(const PauliSum& h, int dense_limit = kDenseQubitLimit);

/// H|psi> on raw amplitudes via per-string bit kernels (no densification).
Vector apply(const PauliSum& h, const Vector& psi);
Vector apply(const PauliSum& h, const StateVector& psi);

/// <psi|H|psi>; the (numerically zero) imaginary part is discarded.
double expectation(const PauliSum& h, const StateVector& psi);

/// <psi|{A,B}|psi> = 2 Re<Apsi|Bpsi>.
double expectation_anticommutator(const PauliSum& a, const PauliSum& b,
                                  const StateVector& psi);

/// <psi|i[A,B]|psi> = -2 Im<Apsi|Bpsi>.
double expectation_commutator_i(const PauliSum& a, const PauliSum& b,
                                const StateVector& psi);

/// Parses the Hamiltonian text format: one `<coefficient> <pauli-string>`
/// per line, `#` comments, blank lines ignored.
PauliSum parse_pauli_sum(std::istream& in);
PauliSum parse_pauli_sum_string(const std::string& text);

}  // namespace qitc
