#include <cstdio>
#include <exception>
#include <functional>
#include <ios>
#include <string>

#include <CLI11.hpp>

#include "qitc/errors.hpp"
#include "qitc/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

int dispatch(const std::function<void()>& action) {
  try {
    action();
    return kExitOk;
  } catch (const qitc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const qitc::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "engine error: %s\n", e.what());
    return kExitNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov-controlled imaginary-time evolution experiments"};
  app.require_subcommand(1);

  qitc::experiments::RunOptions options;
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int batch_count = 100;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--output-dir", options.output_dir,
                    "override the config's output directory");
    cmd->add_option("--seed", seed, "override the config's seed")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_flag("--quiet", options.quiet, "suppress artifact listing");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  add_common(run_cmd);

  CLI::App* batch_cmd = app.add_subcommand(
      "batch", "run the configured method on random initial states");
  add_common(batch_cmd);
  batch_cmd->add_option("--count", batch_count, "number of initial states");
  batch_cmd->add_option("--jobs", options.jobs, "parallel workers");

  CLI11_PARSE(app, argc, argv);
  if (seed_set) options.seed_override = seed;

  if (run_cmd->parsed()) {
    return dispatch([&] { qitc::experiments::run(config_path, options); });
  }
  return dispatch([&] {
    qitc::experiments::batch_initial_states(config_path, batch_count, options);
  });
}
