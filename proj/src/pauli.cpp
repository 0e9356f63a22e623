#include "qitc/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <sstream>
#include <utility>

namespace qitc {

namespace {

void check_same_dims(const PauliSum& h, const Vector& psi) {
  if (psi.size() != static_cast<Eigen::Index>(h.dimension())) {
    throw DimensionMismatch("Pauli sum on " + std::to_string(h.n_qubits()) +
                            " qubits applied to vector of length " +
                            std::to_string(psi.size()));
  }
}

Complex i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

PauliString::PauliString(std::string ops) : ops_(std::move(ops)) {
  if (ops_.size() > 63) {
    throw DimensionTooLarge("Pauli string longer than 63 qubits");
  }
  const int n = n_qubits();
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    switch (ops_[static_cast<std::size_t>(q)]) {
      case 'I':
        break;
      case 'X':
        x_mask_ |= bit;
        break;
      case 'Y':
        x_mask_ |= bit;
        zy_mask_ |= bit;
        ++y_count_;
        break;
      case 'Z':
        zy_mask_ |= bit;
        break;
      default:
        throw ParseError(std::string("invalid Pauli character '") +
                             ops_[static_cast<std::size_t>(q)] + "'",
                         0);
    }
  }
}

bool PauliString::commutes_with(const PauliString& other) const {
  // Sites anticommute where the two single-qubit Paulis differ and neither
  // is the identity.
  const std::uint64_t a_support = x_mask_ | zy_mask_;
  const std::uint64_t b_support = other.x_mask_ | other.zy_mask_;
  const std::uint64_t both = a_support & b_support;
  const std::uint64_t differ = (x_mask_ ^ other.x_mask_) | (zy_mask_ ^ other.zy_mask_);
  return (std::popcount(both & differ) & 1) == 0;
}

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1) {
    throw DimensionMismatch("qubit count must be positive");
  }
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms)
    : PauliSum(n_qubits) {
  terms_ = std::move(terms);
  for (const auto& t : terms_) {
    if (t.string.n_qubits() != n_qubits_) {
      throw DimensionMismatch("term length does not match qubit count");
    }
  }
  canonicalize();
}

void PauliSum::add_term(double coefficient, const std::string& ops) {
  add_term(coefficient, PauliString(ops));
}

void PauliSum::add_term(double coefficient, PauliString string) {
  if (string.n_qubits() != n_qubits_) {
    throw DimensionMismatch("term length does not match qubit count");
  }
  terms_.push_back({coefficient, std::move(string)});
  canonicalize();
}

void PauliSum::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const PauliTerm& a, const PauliTerm& b) {
              return a.string < b.string;
            });
  std::vector<PauliTerm> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().string == t.string) {
      merged.back().coefficient += t.coefficient;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged,
                [](const PauliTerm& t) { return t.coefficient == 0.0; });
  terms_ = std::move(merged);
}

double PauliSum::coefficient_l1() const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += std::abs(t.coefficient);
  return sum;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (other.n_qubits_ != n_qubits_) {
    throw DimensionMismatch("adding Pauli sums of different qubit counts");
  }
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

PauliSum& PauliSum::operator*=(double scale) {
  for (auto& t : terms_) t.coefficient *= scale;
  canonicalize();
  return *this;
}

StateVector::StateVector(Vector amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  const auto dim = amplitudes_.size();
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw DimensionMismatch("amplitude vector length must be a power of two");
  }
  n_qubits_ = std::countr_zero(static_cast<std::uint64_t>(dim));
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || norm == 0.0) {
    throw NonFiniteError("state vector has zero or non-finite norm");
  }
  amplitudes_ /= norm;
}

StateVector StateVector::zero_state(int n_qubits) {
  return basis_state(n_qubits, 0);
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
  Vector v = Vector::Zero(Eigen::Index{1} << n_qubits);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v));
}

Matrix to_dense(const PauliSum& h, int dense_limit) {
  if (h.n_qubits() > dense_limit) {
    throw DimensionTooLarge("dense realization requested for " +
                            std::to_string(h.n_qubits()) +
                            " qubits (limit " + std::to_string(dense_limit) +
                            ")");
  }
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& term : h.terms()) {
    const Complex base = term.coefficient * i_power(term.string.y_count());
    const std::uint64_t xm = term.string.x_mask();
    const std::uint64_t zym = term.string.zy_mask();
    for (std::uint64_t b = 0; b < h.dimension(); ++b) {
      const double sign = (std::popcount(b & zym) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ xm), static_cast<Eigen::Index>(b)) +=
          sign * base;
    }
  }
  return m;
}

Vector apply(const PauliSum& h, const Vector& psi) {
  check_same_dims(h, psi);
  Vector out = Vector::Zero(psi.size());
  for (const auto& term : h.terms()) {
    const Complex base = term.coefficient * i_power(term.string.y_count());
    const std::uint64_t xm = term.string.x_mask();
    const std::uint64_t zym = term.string.zy_mask();
    const auto dim = static_cast<std::uint64_t>(psi.size());
    for (std::uint64_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(b & zym) & 1) ? -1.0 : 1.0;
      out(static_cast<Eigen::Index>(b ^ xm)) +=
          sign * base * psi(static_cast<Eigen::Index>(b));
    }
  }
  return out;
}

Vector apply(const PauliSum& h, const StateVector& psi) {
  return apply(h, psi.amplitudes());
}

double expectation(const PauliSum& h, const StateVector& psi) {
  const Vector hpsi = apply(h, psi.amplitudes());
  return psi.amplitudes().dot(hpsi).real();
}

double expectation_anticommutator(const PauliSum& a, const PauliSum& b,
                                  const StateVector& psi) {
  const Vector av = apply(a, psi.amplitudes());
  const Vector bv = apply(b, psi.amplitudes());
  return 2.0 * av.dot(bv).real();
}

double expectation_commutator_i(const PauliSum& a, const PauliSum& b,
                                const StateVector& psi) {
  const Vector av = apply(a, psi.amplitudes());
  const Vector bv = apply(b, psi.amplitudes());
  return -2.0 * av.dot(bv).imag();
}

PauliSum parse_pauli_sum(std::istream& in) {
  std::string line;
  int line_number = 0;
  int n_qubits = -1;
  std::vector<PauliTerm> terms;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string coeff_text, ops;
    if (!(fields >> coeff_text)) continue;  // blank line
    if (!(fields >> ops)) {
      throw ParseError("expected `<coefficient> <pauli-string>`", line_number);
    }
    std::string extra;
    if (fields >> extra) {
      throw ParseError("unexpected trailing field '" + extra + "'",
                       line_number);
    }
    double coefficient = 0.0;
    std::size_t consumed = 0;
    try {
      coefficient = std::stod(coeff_text, &consumed);
    } catch (const std::exception&) {
      throw ParseError("invalid coefficient '" + coeff_text + "'",
                       line_number);
    }
    if (consumed != coeff_text.size()) {
      throw ParseError("invalid coefficient '" + coeff_text + "'",
                       line_number);
    }
    PauliString string;
    try {
      string = PauliString(ops);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_number);
    }
    if (n_qubits < 0) {
      n_qubits = string.n_qubits();
    } else if (string.n_qubits() != n_qubits) {
      throw InconsistentLength("Pauli string length " +
                                   std::to_string(string.n_qubits()) +
                                   " differs from earlier length " +
                                   std::to_string(n_qubits),
                               line_number);
    }
    terms.push_back({coefficient, std::move(string)});
  }
  if (n_qubits < 0) {
    throw ParseError("no terms found", line_number);
  }
  return PauliSum(n_qubits, std::move(terms));
}

PauliSum parse_pauli_sum_string(const std::string& text) {
  std::istringstream in(text);
  return parse_pauli_sum(in);
}

}  // namespace qitc
