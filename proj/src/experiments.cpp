#include "qitc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qitc/analysis.hpp"
#include "qitc/controllability.hpp"
#include "qitc/io.hpp"
#include "qitc/lyapunov.hpp"
#include "qitc/problems.hpp"
#include "qitc/variational.hpp"

namespace qitc::experiments {

namespace {

using nlohmann::json;

struct LoadedConfig {
  json doc;
  std::string raw_bytes;
  std::string experiment;
  std::uint64_t seed = 0;
  std::string output_dir;
};

[[noreturn]] void config_error(const std::string& field,
                               const std::string& message) {
  throw ConfigError("config field '" + field + "': " + message);
}

const json& require(const json& doc, const std::string& field) {
  if (!doc.contains(field)) config_error(field, "missing");
  return doc.at(field);
}

template <typename T>
T get_or(const json& doc, const std::string& field, T fallback) {
  if (!doc.contains(field)) return fallback;
  try {
    return doc.at(field).get<T>();
  } catch (const json::exception& e) {
    config_error(field, e.what());
  }
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  LoadedConfig cfg;
  cfg.raw_bytes = buffer.str();
  try {
    cfg.doc = json::parse(cfg.raw_bytes);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  cfg.experiment = require(cfg.doc, "experiment").get<std::string>();
  cfg.seed = get_or<std::uint64_t>(cfg.doc, "seed", 0);
  cfg.output_dir = get_or<std::string>(cfg.doc, "output_dir", "out");
  return cfg;
}

PauliSum parse_terms_array(const json& terms, const std::string& field) {
  if (!terms.is_array() || terms.empty()) {
    config_error(field, "expected a nonempty array of [coefficient, string]");
  }
  std::vector<PauliTerm> parsed;
  int n_qubits = -1;
  for (const auto& entry : terms) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_string()) {
      config_error(field, "each term must be [coefficient, \"pauli-string\"]");
    }
    PauliString string(entry[1].get<std::string>());
    if (n_qubits < 0) n_qubits = string.n_qubits();
    if (string.n_qubits() != n_qubits) {
      config_error(field, "inconsistent Pauli string lengths");
    }
    parsed.push_back({entry[0].get<double>(), std::move(string)});
  }
  return PauliSum(n_qubits, std::move(parsed));
}

PauliSum parse_hamiltonian(const json& spec, const std::string& field) {
  if (spec.contains("terms")) {
    return parse_terms_array(spec.at("terms"), field + ".terms");
  }
  if (spec.contains("file")) {
    return load_hamiltonian(spec.at("file").get<std::string>());
  }
  if (spec.contains("generator")) {
    const json& gen = spec.at("generator");
    const std::string type = require(gen, "type").get<std::string>();
    if (type == "sat_random") {
      const auto inst = random_satisfiable_sat(
          require(gen, "n_vars").get<int>(),
          require(gen, "n_clauses").get<int>(),
          get_or<std::uint64_t>(gen, "seed", 0));
      return compile_sat(inst);
    }
    if (type == "sat_file") {
      return compile_sat(load_dimacs(require(gen, "file").get<std::string>()));
    }
    if (type == "long_range_ising") {
      IsingCoupling coupling;
      const std::string kind = get_or<std::string>(gen, "coupling", "uniform");
      if (kind == "uniform") {
        coupling.kind = CouplingKind::uniform;
      } else if (kind == "power_law") {
        coupling.kind = CouplingKind::power_law;
      } else {
        config_error(field + ".generator.coupling", "unknown kind " + kind);
      }
      coupling.j0 = get_or<double>(gen, "j0", 1.0);
      coupling.alpha = get_or<double>(gen, "alpha", 1.0);
      return long_range_ising(require(gen, "n_qubits").get<int>(), coupling,
                              get_or<double>(gen, "field", 0.0));
    }
    config_error(field + ".generator.type", "unknown generator " + type);
  }
  config_error(field, "expected one of terms | file | generator");
}

ControlConfig parse_control_config(const json& control) {
  ControlConfig cfg;
  const std::string law = get_or<std::string>(control, "law", "standard");
  if (law == "standard") {
    cfg.law = ControlLaw::standard;
  } else if (law == "bang_bang") {
    cfg.law = ControlLaw::bang_bang;
  } else if (law == "approx_bang_bang") {
    cfg.law = ControlLaw::approx_bang_bang;
  } else if (law == "off") {
    cfg.law = ControlLaw::off;
  } else {
    config_error("control.law", "unknown law " + law);
  }
  cfg.k_gain = get_or<double>(control, "k_gain", 1.0);
  cfg.s_max = get_or<double>(control, "s_max", 1.0);
  cfg.gamma = get_or<double>(control, "gamma", 10.0);
  cfg.l_threshold = get_or<double>(control, "l_threshold", 1e-3);
  if (cfg.k_gain <= 0 || cfg.s_max <= 0 || cfg.gamma <= 0 ||
      cfg.l_threshold < 0) {
    config_error("control", "gains must be positive and L nonnegative");
  }
  const std::string cap = get_or<std::string>(control, "beta_cap", "energy_norm");
  if (cap == "energy_norm") {
    cfg.beta_cap_mode = BetaCapMode::energy_norm;
  } else if (cap == "none") {
    cfg.beta_cap_mode = BetaCapMode::none;
  } else {
    config_error("control.beta_cap", "expected energy_norm | none");
  }
  return cfg;
}

std::vector<PauliSum> parse_controls(const json& control) {
  std::vector<PauliSum> h_ds;
  if (!control.contains("h_d")) return h_ds;
  const json& list = control.at("h_d");
  if (!list.is_array()) config_error("control.h_d", "expected an array");
  for (std::size_t k = 0; k < list.size(); ++k) {
    h_ds.push_back(
        parse_terms_array(list[k], "control.h_d[" + std::to_string(k) + "]"));
  }
  return h_ds;
}

EvolutionConfig parse_evolution(const json& doc) {
  EvolutionConfig cfg;
  if (!doc.contains("evolution")) return cfg;
  const json& evolution = doc.at("evolution");
  cfg.dt = get_or<double>(evolution, "dt", 0.01);
  cfg.max_steps = get_or<int>(evolution, "max_steps", 1000);
  if (cfg.dt <= 0 || cfg.max_steps < 1) {
    config_error("evolution", "dt must be positive and max_steps >= 1");
  }
  const std::string integrator =
      get_or<std::string>(evolution, "integrator", "rk4");
  if (integrator == "euler") {
    cfg.integrator = Integrator::euler;
  } else if (integrator == "rk4") {
    cfg.integrator = Integrator::rk4;
  } else {
    config_error("evolution.integrator", "expected euler | rk4");
  }
  if (evolution.contains("convergence")) {
    const json& convergence = evolution.at("convergence");
    const std::string mode =
        get_or<std::string>(convergence, "mode", "fidelity_to_target");
    if (mode == "fidelity_to_target") {
      cfg.convergence.mode = ConvergenceMode::fidelity_to_target;
      cfg.convergence.threshold =
          get_or<double>(convergence, "threshold", 0.99);
      if (cfg.convergence.threshold <= 0 || cfg.convergence.threshold > 1) {
        config_error("evolution.convergence.threshold", "must lie in (0, 1]");
      }
    } else if (mode == "energy_variance") {
      cfg.convergence.mode = ConvergenceMode::energy_variance;
      cfg.convergence.threshold =
          get_or<double>(convergence, "threshold", 1e-6);
      if (cfg.convergence.threshold <= 0) {
        config_error("evolution.convergence.threshold", "must be positive");
      }
    } else {
      config_error("evolution.convergence.mode",
                   "expected fidelity_to_target | energy_variance");
    }
  }
  return cfg;
}

NoiseModel parse_noise(const json& doc, std::uint64_t run_seed) {
  NoiseModel noise;
  noise.seed = run_seed;
  if (!doc.contains("noise")) return noise;
  const json& section = doc.at("noise");
  noise.enabled = get_or<bool>(section, "enabled", false);
  noise.variance = get_or<double>(section, "variance", 1e-4);
  noise.seed = get_or<std::uint64_t>(section, "seed", run_seed);
  if (noise.variance < 0) config_error("noise.variance", "must be >= 0");
  return noise;
}

struct AnsatzSpec {
  int layers = 4;
  std::vector<RotationAxis> axes{RotationAxis::y, RotationAxis::z};
  EntanglerPattern entangler = EntanglerPattern::chain;
  bool random_theta0 = false;
};

AnsatzSpec parse_ansatz(const json& doc) {
  AnsatzSpec spec;
  if (!doc.contains("ansatz")) return spec;
  const json& section = doc.at("ansatz");
  spec.layers = get_or<int>(section, "layers", 4);
  if (spec.layers < 1) config_error("ansatz.layers", "must be >= 1");
  if (section.contains("rotation_axes")) {
    spec.axes.clear();
    for (const auto& axis : section.at("rotation_axes")) {
      const std::string name = axis.get<std::string>();
      if (name == "X") {
        spec.axes.push_back(RotationAxis::x);
      } else if (name == "Y") {
        spec.axes.push_back(RotationAxis::y);
      } else if (name == "Z") {
        spec.axes.push_back(RotationAxis::z);
      } else {
        config_error("ansatz.rotation_axes", "expected X | Y | Z");
      }
    }
    if (spec.axes.empty()) config_error("ansatz.rotation_axes", "empty");
  }
  const std::string pattern = get_or<std::string>(section, "entangler", "chain");
  if (pattern == "chain") {
    spec.entangler = EntanglerPattern::chain;
  } else if (pattern == "ring") {
    spec.entangler = EntanglerPattern::ring;
  } else {
    config_error("ansatz.entangler", "expected chain | ring");
  }
  const std::string theta0 = get_or<std::string>(section, "theta0", "zeros");
  if (theta0 == "zeros") {
    spec.random_theta0 = false;
  } else if (theta0 == "random") {
    spec.random_theta0 = true;
  } else {
    config_error("ansatz.theta0", "expected zeros | random");
  }
  return spec;
}

StateVector parse_initial_state(const json& doc, const PauliSum& h_p,
                                std::mt19937_64& rng) {
  const int n = h_p.n_qubits();
  std::string type = "uniform";
  std::uint64_t index = 0;
  if (doc.contains("initial_state")) {
    const json& section = doc.at("initial_state");
    type = get_or<std::string>(section, "type", "uniform");
    index = get_or<std::uint64_t>(section, "index", 0);
  }
  if (type == "uniform") {
    return StateVector(Vector::Ones(Eigen::Index{1} << n));
  }
  if (type == "basis") {
    if (index >= h_p.dimension()) {
      config_error("initial_state.index", "exceeds the basis size");
    }
    return StateVector::basis_state(n, index);
  }
  if (type == "haar") {
    return haar_random_state(n, rng);
  }
  config_error("initial_state.type", "expected uniform | basis | haar");
}

struct ArtifactWriter {
  std::filesystem::path dir;
  std::vector<std::string> names;

  void write(const std::string& name, const std::string& content) {
    write_file((dir / name).string(), content);
    names.push_back(name);
  }
};

void write_manifest(ArtifactWriter& artifacts, const LoadedConfig& cfg,
                    std::chrono::steady_clock::time_point start) {
  const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  json manifest;
  manifest["config_hash"] = fnv1a_hex(cfg.raw_bytes);
  manifest["seed"] = cfg.seed;
  manifest["artifacts"] = artifacts.names;
  manifest["wall_ms"] = wall_ms;
  manifest["version"] = kVersion;
  // Written to a temp name first so the manifest appears atomically after
  // all other outputs.
  const auto tmp = artifacts.dir / ".manifest.json.tmp";
  write_file(tmp.string(), manifest.dump(2) + "\n");
  std::filesystem::rename(tmp, artifacts.dir / "manifest.json");
}

json fit_to_json(const ExpFit& fit) {
  return json{{"a", fit.a}, {"b", fit.b}, {"c", fit.c},
              {"residual", fit.residual}};
}

std::vector<double> parse_s_grid(const json& doc) {
  std::vector<double> grid;
  if (doc.contains("s_grid")) {
    const json& section = doc.at("s_grid");
    if (section.is_array()) {
      for (const auto& v : section) grid.push_back(v.get<double>());
    } else {
      const int count = get_or<int>(section, "count", 21);
      const double lo = get_or<double>(section, "from", 0.0);
      const double hi = get_or<double>(section, "to", 1.0);
      if (count < 2 || lo < 0 || hi > 1 || lo >= hi) {
        config_error("s_grid", "need count >= 2 and 0 <= from < to <= 1");
      }
      for (int i = 0; i < count; ++i) {
        grid.push_back(lo + (hi - lo) * i / (count - 1));
      }
    }
  } else {
    for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  }
  for (double s : grid) {
    if (s < 0 || s > 1) config_error("s_grid", "values must lie in [0, 1]");
  }
  return grid;
}

ControlSetup build_setup(const LoadedConfig& cfg, const PauliSum& h_p,
                         bool require_controls) {
  ControlConfig control_cfg;
  std::vector<PauliSum> h_ds;
  if (cfg.doc.contains("control")) {
    control_cfg = parse_control_config(cfg.doc.at("control"));
    h_ds = parse_controls(cfg.doc.at("control"));
  }
  if (require_controls && h_ds.empty()) {
    config_error("control.h_d",
                 "experiment '" + cfg.experiment +
                     "' needs at least one control Hamiltonian");
  }
  return ControlSetup(h_p, std::move(h_ds), control_cfg);
}

void run_trajectory_experiment(const LoadedConfig& cfg,
                               ArtifactWriter& artifacts) {
  const PauliSum h_p =
      parse_hamiltonian(require(cfg.doc, "hamiltonian"), "hamiltonian");
  const EvolutionConfig evolution = parse_evolution(cfg.doc);
  std::mt19937_64 rng(cfg.seed);
  const StateVector psi0 = parse_initial_state(cfg.doc, h_p, rng);
  const TargetSpace target = TargetSpace::ground_space(h_p);

  Trajectory traj;
  if (cfg.experiment == "ite") {
    traj = run_undriven_ite(psi0, h_p, evolution, &target);
  } else if (cfg.experiment == "qitc") {
    const ControlSetup setup = build_setup(cfg, h_p, false);
    traj = run_driven_ite(setup, psi0, evolution, &target);
  } else if (cfg.experiment == "real_time") {
    const ControlSetup setup = build_setup(cfg, h_p, true);
    traj = run_driven_real_time(setup, psi0, evolution, &target);
  } else {  // variational
    const ControlSetup setup = build_setup(cfg, h_p, false);
    const AnsatzSpec spec = parse_ansatz(cfg.doc);
    VariationalState vs;
    vs.circuit = AnsatzCircuit::hardware_efficient(h_p.n_qubits(), spec.layers,
                                                   spec.axes, spec.entangler);
    vs.theta = Eigen::VectorXd::Zero(vs.circuit.n_params);
    if (spec.random_theta0) {
      std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                                   std::numbers::pi);
      for (Eigen::Index i = 0; i < vs.theta.size(); ++i) {
        vs.theta(i) = angle(rng);
      }
    }
    const NoiseModel noise = parse_noise(cfg.doc, cfg.seed);
    traj = run_variational_ite(vs, setup, evolution, noise, &target);
  }

  json report;
  report["converged_step"] =
      traj.converged_step ? json(*traj.converged_step) : json(nullptr);
  report["final_energy"] = traj.energies.back();
  artifacts.write("trajectory.csv", trajectory_csv(traj));
  artifacts.write("report.json", report.dump(2) + "\n");
}

void run_controllability(const LoadedConfig& cfg, ArtifactWriter& artifacts) {
  const PauliSum h_p =
      parse_hamiltonian(require(cfg.doc, "hamiltonian"), "hamiltonian");
  const ControlSetup setup = build_setup(cfg, h_p, true);
  const ControllabilityReport report = lie_closure(h_p, setup.h_d);
  json doc;
  doc["lie_dimension"] = report.lie_dimension;
  doc["full_dimension"] = report.full_dimension;
  doc["full_dimension_u"] = report.full_dimension_u;
  doc["classification"] =
      report.classification == Controllability::complete ? "complete"
                                                         : "incomplete";
  doc["generators_used"] = report.generators_used;
  doc["truncated"] = report.truncated;
  artifacts.write("controllability.json", doc.dump(2) + "\n");
}

AdiabaticFamily parse_family(const LoadedConfig& cfg) {
  const PauliSum h_final =
      parse_hamiltonian(require(cfg.doc, "hamiltonian"), "hamiltonian");
  if (cfg.doc.contains("h_init")) {
    return {parse_hamiltonian(cfg.doc.at("h_init"), "h_init"), h_final};
  }
  return {build_h_init(h_final.n_qubits()), h_final};
}

void run_gap_sweep(const LoadedConfig& cfg, ArtifactWriter& artifacts) {
  const AdiabaticFamily family = parse_family(cfg);
  const auto gaps = gap_sweep(family, parse_s_grid(cfg.doc));
  std::ostringstream csv;
  csv << "x,y\n";
  for (const auto& [s, gap] : gaps) {
    csv << format_double(s) << ',' << format_double(gap) << "\n";
  }
  artifacts.write("gap_sweep.csv", csv.str());
}

void run_level_trace(const LoadedConfig& cfg, ArtifactWriter& artifacts) {
  const PauliSum h_p =
      parse_hamiltonian(require(cfg.doc, "hamiltonian"), "hamiltonian");
  const ControlSetup setup = build_setup(cfg, h_p, true);
  const EvolutionConfig evolution = parse_evolution(cfg.doc);
  std::mt19937_64 rng(cfg.seed);
  const StateVector psi0 = parse_initial_state(cfg.doc, h_p, rng);
  const TargetSpace target = TargetSpace::ground_space(h_p);
  const Trajectory traj = run_driven_ite(setup, psi0, evolution, &target);
  const auto snapshots = level_trajectory(setup, traj);

  std::ostringstream csv;
  csv << "tau";
  for (std::size_t i = 0; i < snapshots.front().levels.size(); ++i) {
    csv << ",level_" << i;
  }
  csv << ",gap_01,reordered\n";
  for (const auto& snap : snapshots) {
    csv << format_double(snap.s_or_tau);
    for (double level : snap.levels) csv << ',' << format_double(level);
    csv << ',' << format_double(snap.gap_01) << ','
        << (snap.reordered ? 1 : 0) << "\n";
  }
  artifacts.write("trajectory.csv", trajectory_csv(traj));
  artifacts.write("levels.csv", csv.str());
}

int steps_or_max(const Trajectory& traj, const EvolutionConfig& cfg) {
  return traj.converged_step ? *traj.converged_step : cfg.max_steps;
}

void run_sat_anneal_sweep(const LoadedConfig& cfg, ArtifactWriter& artifacts) {
  const AdiabaticFamily family = parse_family(cfg);
  const ControlSetup proto =
      build_setup(cfg, family.h_final, true);  // validated against h_final
  const EvolutionConfig evolution = parse_evolution(cfg.doc);
  const std::vector<double> grid = parse_s_grid(cfg.doc);

  std::vector<SpeedupPoint> points;
  std::ostringstream csv;
  csv << "s,gap,steps_undriven,steps_driven,delta_steps\n";
  for (double s : grid) {
    const PauliSum h_s = interpolate(family, s);
    const TargetSpace target = TargetSpace::ground_space(h_s);
    const StateVector psi0(Vector::Ones(Eigen::Index{1} << h_s.n_qubits()));
    const ControlSetup setup(h_s, proto.h_d, proto.config);
    const Trajectory driven = run_driven_ite(setup, psi0, evolution, &target);
    const Trajectory undriven =
        run_undriven_ite(psi0, h_s, evolution, &target);
    const auto gaps = gap_sweep(family, {s});
    SpeedupPoint point;
    point.gap = gaps.front().second;
    point.steps_driven = steps_or_max(driven, evolution);
    point.steps_undriven = steps_or_max(undriven, evolution);
    point.delta_steps = point.steps_undriven - point.steps_driven;
    points.push_back(point);
    csv << format_double(s) << ',' << format_double(point.gap) << ','
        << point.steps_undriven << ',' << point.steps_driven << ','
        << point.delta_steps << "\n";
  }
  artifacts.write("speedup.csv", csv.str());

  std::vector<std::pair<double, double>> vs_gap, vs_inverse_gap;
  for (const auto& point : points) {
    if (point.gap <= 0) continue;
    vs_gap.emplace_back(point.gap, point.delta_steps);
    vs_inverse_gap.emplace_back(1.0 / point.gap, point.delta_steps);
  }
  if (vs_gap.size() >= 4) {
    artifacts.write("fit_gap.json",
                    fit_to_json(fit_exponential(vs_gap)).dump(2) + "\n");
    artifacts.write(
        "fit_inverse_gap.json",
        fit_to_json(fit_exponential(vs_inverse_gap)).dump(2) + "\n");
  }
}

}  // namespace

void run(const std::string& config_path, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  LoadedConfig cfg = load_config(config_path);
  if (options.seed_override) cfg.seed = *options.seed_override;
  if (!options.output_dir.empty()) cfg.output_dir = options.output_dir;

  static const std::vector<std::string> kKnown = {
      "ite",       "qitc",          "real_time",        "variational",
      "controllability", "sat_anneal_sweep", "gap_sweep", "level_trace"};
  if (std::find(kKnown.begin(), kKnown.end(), cfg.experiment) ==
      kKnown.end()) {
    config_error("experiment", "unknown experiment " + cfg.experiment);
  }

  std::filesystem::create_directories(cfg.output_dir);
  ArtifactWriter artifacts{cfg.output_dir, {}};

  if (cfg.experiment == "ite" || cfg.experiment == "qitc" ||
      cfg.experiment == "real_time" || cfg.experiment == "variational") {
    run_trajectory_experiment(cfg, artifacts);
  } else if (cfg.experiment == "controllability") {
    run_controllability(cfg, artifacts);
  } else if (cfg.experiment == "gap_sweep") {
    run_gap_sweep(cfg, artifacts);
  } else if (cfg.experiment == "level_trace") {
    run_level_trace(cfg, artifacts);
  } else if (cfg.experiment == "sat_anneal_sweep") {
    run_sat_anneal_sweep(cfg, artifacts);
  }

  write_manifest(artifacts, cfg, start);
  if (!options.quiet) {
    for (const auto& name : artifacts.names) {
      std::fprintf(stdout, "wrote %s\n",
                   (artifacts.dir / name).string().c_str());
    }
  }
}

void batch_initial_states(const std::string& config_path, int count,
                          const RunOptions& options) {
  if (count < 1) throw ConfigError("batch count must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  LoadedConfig cfg = load_config(config_path);
  if (options.seed_override) cfg.seed = *options.seed_override;
  if (!options.output_dir.empty()) cfg.output_dir = options.output_dir;
  if (cfg.experiment != "qitc" && cfg.experiment != "real_time") {
    config_error("experiment", "batch supports qitc | real_time");
  }

  const PauliSum h_p =
      parse_hamiltonian(require(cfg.doc, "hamiltonian"), "hamiltonian");
  const ControlSetup setup = build_setup(cfg, h_p, true);
  const EvolutionConfig evolution = parse_evolution(cfg.doc);
  const TargetSpace target = TargetSpace::ground_space(h_p);
  const bool real_time_mode = cfg.experiment == "real_time";

  struct Row {
    double initial_fidelity = 0.0;
    std::optional<int> steps_driven;
    std::optional<int> steps_baseline;
  };
  std::vector<Row> rows(static_cast<std::size_t>(count));

  const auto run_member = [&](int index) {
    std::mt19937_64 rng(child_seed(cfg.seed, static_cast<std::uint64_t>(index)));
    const StateVector psi0 = haar_random_state(h_p.n_qubits(), rng);
    Row row;
    row.initial_fidelity = target.fidelity(psi0);
    const Trajectory driven = run_driven_ite(setup, psi0, evolution, &target);
    row.steps_driven = driven.converged_step;
    if (real_time_mode) {
      const Trajectory baseline =
          run_driven_real_time(setup, psi0, evolution, &target);
      row.steps_baseline = baseline.converged_step;
    } else {
      const Trajectory baseline =
          run_undriven_ite(psi0, h_p, evolution, &target);
      row.steps_baseline = baseline.converged_step;
    }
    rows[static_cast<std::size_t>(index)] = row;
  };

  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) run_member(i);
  } else {
    std::vector<std::thread> workers;
    std::atomic<int> next{0};
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          run_member(i);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  std::ostringstream csv;
  const char* baseline_name =
      real_time_mode ? "steps_real_time" : "steps_undriven";
  csv << "index,initial_fidelity,steps_driven," << baseline_name
      << ",converged_driven,converged_baseline\n";
  for (int i = 0; i < count; ++i) {
    const Row& row = rows[static_cast<std::size_t>(i)];
    csv << i << ',' << format_double(row.initial_fidelity) << ',';
    if (row.steps_driven) csv << *row.steps_driven;
    csv << ',';
    if (row.steps_baseline) csv << *row.steps_baseline;
    csv << ',' << (row.steps_driven ? 1 : 0) << ','
        << (row.steps_baseline ? 1 : 0) << "\n";
  }

  std::filesystem::create_directories(cfg.output_dir);
  ArtifactWriter artifacts{cfg.output_dir, {}};
  artifacts.write("batch.csv", csv.str());
  write_manifest(artifacts, cfg, start);
  if (!options.quiet) {
    std::fprintf(stdout, "wrote %s\n",
                 (artifacts.dir / "batch.csv").string().c_str());
  }
}

}  // namespace qitc::experiments
