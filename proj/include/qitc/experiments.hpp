#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace qitc::experiments {

inline constexpr const char* kVersion = "qitc 0.1.0";

struct RunOptions {
  std::string output_dir;  // empty: use the config's output_dir
  std::optional<std::uint64_t> seed_override;
  bool quiet = false;
  int jobs = 1;
};

/// Runs the experiment named in the config file and writes its artifacts
/// plus a run manifest under the output directory. Throws ConfigError on
/// invalid configs (before any compute), engine errors on numeric failure,
/// and std::ios_base::failure on I/O problems.
void run(const std::string& config_path, const RunOptions& options);

/// Ensemble protocol: `count` Haar-random initial states, each run under the
/// configured driven method and its undriven baseline; emits a per-state
/// summary CSV.
void batch_initial_states(const std::string& config_path, int count,
                          const RunOptions& options);

}  // namespace qitc::experiments
