#pragma once

#include <vector>

#include "qitc/pauli.hpp"

namespace qitc {

enum class Controllability { complete, incomplete };

struct ControllabilityReport {
  int lie_dimension = 0;
  int full_dimension = 0;    // N^2 - 1 (traceless su(N) convention)
  int full_dimension_u = 0;  // N^2 (u(N), reported for comparison)
  Controllability classification = Controllability::incomplete;
  int generators_used = 0;
  bool truncated = false;
};

/// Dimension of the real Lie algebra generated by {iH_p, iH_d^k} (traceless
/// parts), grown by repeated commutators with rank tolerance 1e-9.
/// Classification is complete iff the dimension reaches N^2 - 1.
ControllabilityReport lie_closure(const PauliSum& h_p,
                                  const std::vector<PauliSum>& h_ds,
                                  int max_dim = -1);

/// For each term of h_p, whether every string of h_d commutes with it.
std::vector<bool> commutes_with_terms(const PauliSum& h_d,
                                      const PauliSum& h_p);

}  // namespace qitc
