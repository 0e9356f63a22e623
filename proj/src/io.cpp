#include "qitc/io.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace qitc {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string trajectory_csv(const Trajectory& traj) {
  const bool has_control = !traj.lyapunov.empty();
  const bool has_measured = !traj.measured_energies.empty();
  const std::size_t n_channels =
      traj.betas.empty() ? 0 : traj.betas.front().size();

  std::ostringstream out;
  out << "step,time,energy,fidelity,beta";
  if (has_control) {
    out << ",V,sigma2";
    for (std::size_t k = 0; k < n_channels; ++k) out << ",D_" << k;
    for (std::size_t k = 0; k < n_channels; ++k) out << ",beta_" << k;
    out << ",Vdot";
  }
  if (has_measured) out << ",energy_measured";
  out << "\n";

  for (int step = 0; step < traj.n_steps(); ++step) {
    const auto i = static_cast<std::size_t>(step);
    out << step << ',' << format_double(traj.times[i]) << ','
        << format_double(traj.energies[i]) << ',';
    if (i < traj.fidelities.size()) out << format_double(traj.fidelities[i]);
    out << ',';
    double beta_mean = 0.0;
    if (!traj.betas[i].empty()) {
      beta_mean =
          std::accumulate(traj.betas[i].begin(), traj.betas[i].end(), 0.0) /
          static_cast<double>(traj.betas[i].size());
    }
    out << format_double(beta_mean);
    if (has_control) {
      const auto& sig = traj.lyapunov[i];
      out << ',' << format_double(sig.v) << ',' << format_double(sig.sigma2);
      for (double d : sig.d) out << ',' << format_double(d);
      for (double b : traj.betas[i]) out << ',' << format_double(b);
      out << ',' << format_double(sig.vdot);
    }
    if (has_measured) {
      out << ',' << format_double(traj.measured_energies[i]);
    }
    out << "\n";
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot open for writing: " + path);
  }
  out << content;
  if (!out) {
    throw std::ios_base::failure("write failed: " + path);
  }
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

StateVector haar_random_state(int n_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(Eigen::Index{1} << n_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = Complex(gauss(rng), gauss(rng));
  }
  return StateVector(std::move(v));
}

std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace qitc
