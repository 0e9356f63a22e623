#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "qitc/evolution.hpp"
#include "qitc/pauli.hpp"

namespace qitc {

/// Shortest round-trippable decimal representation (17 significant digits).
std::string format_double(double value);

/// Trajectory CSV: header `step,time,energy,fidelity,beta`, with the control
/// log columns `V,sigma2,D_0..,beta_0..,Vdot` appended for driven runs and
/// `energy_measured` for noisy variational runs. `beta` is the channel mean.
std::string trajectory_csv(const Trajectory& traj);

void write_file(const std::string& path, const std::string& content);

/// FNV-1a 64-bit hash, hex-encoded; used for config hashing in manifests.
std::string fnv1a_hex(const std::string& bytes);

/// Haar-random state: normalized vector of independent standard complex
/// Gaussians.
StateVector haar_random_state(int n_qubits, std::mt19937_64& rng);

/// Child seed for batch member `index`, decorrelated via splitmix64.
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace qitc
