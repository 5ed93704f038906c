// sacfv: command-line driver for the stochastic Allen-Cahn finite-volume experiments.
//
// Exit codes: 0 success, 1 failed check, 2 configuration error, 3 numerical failure,
// 4 output I/O error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sacfv/config.hpp"
#include "sacfv/errors.hpp"
#include "sacfv/experiments.hpp"
#include "sacfv/golden.hpp"
#include "sacfv/io.hpp"
#include "sacfv/validation.hpp"

namespace fs = std::filesystem;
using namespace sacfv;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericalFailure = 3, kIoError = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_file;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<long long> paths;
  std::string preset = "desk";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_file, "key = value configuration file");
  cmd->add_option("--out", o.out_dir, "output directory (overrides out_dir)");
  cmd->add_option("--seed", o.seed, "global seed (overrides seed)");
  cmd->add_option("--paths", o.paths, "Monte Carlo path count (overrides N_p)");
  cmd->add_option("--preset", o.preset, "parameter preset")->check(CLI::IsMember({"desk", "paper"}));
}

RunConfig resolve_config(const std::string& command, const CommonOptions& o) {
  RunConfig config = preset_config(command, parse_preset(o.preset));
  if (!o.config_file.empty()) apply_config_file(config, o.config_file);
  if (!o.out_dir.empty()) config.out_dir = o.out_dir;
  if (o.seed) config.study.seed = *o.seed;
  if (o.paths) config.study.paths = Index(*o.paths);
  config.study.validate();
  return config;
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  std::ofstream out(config.out_dir / name);
  if (!out) throw IoError("cannot write " + (config.out_dir / name).string());
  return out;
}

void write_manifest(const RunConfig& config) {
  auto out = open_output(config, "manifest.txt");
  out << "run_id = " << run_identifier(config) << '\n' << canonical_text(config);
}

int cmd_table_repro(const RunConfig& config) {
  if (config.path_file.empty()) throw ConfigError("table-repro needs path_file naming the injected increments");
  const NoisePath path = read_noise_path_csv(config.path_file, config.study.horizon);
  const double amplitude = config.study.amplitudes.empty() ? 10.0 : config.study.amplitudes.front();
  const TableReport report = reproduce_golden_tables(path, config.study.epsilon, amplitude);

  auto out = open_output(config, "tables.csv");
  out << "table,n,cell,computed,reference,deviation\n";
  const auto& tables = golden_tables();
  for (std::size_t t = 0; t < tables.size(); ++t) {
    std::cout << tables[t].name << " (max dev " << format_double(report.tables[t].max_deviation) << ")\n";
    for (std::size_t n = 0; n < tables[t].rows.size(); ++n) {
      std::cout << "  n=" << n + 1 << ":";
      for (std::size_t k = 0; k < tables[t].rows[n].size(); ++k) {
        const double computed = report.tables[t].computed[n][Index(k)];
        const double reference = tables[t].rows[n][k];
        std::cout << ' ' << format_double(computed);
        out << tables[t].name << ',' << n + 1 << ',' << k << ',' << format_double(computed) << ','
            << format_double(reference) << ',' << format_double(std::abs(computed - reference)) << '\n';
      }
      std::cout << '\n';
    }
  }
  write_manifest(config);
  const bool ok = report.max_deviation <= 1e-5;
  std::cout << (ok ? "PASS" : "FAIL") << ": max dev " << format_double(report.max_deviation)
            << (ok ? " <= 1e-5\n" : " > 1e-5\n");
  return ok ? kOk : kCheckFailed;
}

int cmd_simulate(const RunConfig& config) {
  const auto& s = config.study;
  const MeshD mesh = build_uniform_mesh<double>(s.cells_per_axis, s.half_width);
  const FieldD u0 = initial_field(mesh);
  SchemeParams<double> params;
  params.horizon = s.horizon;
  params.steps = s.steps;
  params.epsilon_schedule = s.epsilon;
  params.amplitude = s.amplitudes.empty() ? 0.0 : s.amplitudes.front();
  params.variant = s.variant;
  const NoisePath noise = config.path_file.empty() ? sample_path(s.seed, 0, s.horizon, s.steps)
                                                   : read_noise_path_csv(config.path_file, s.horizon);
  const TimeStepper<double> stepper(mesh, params);
  const auto storage = s.checkpoints.empty() ? TrajectoryStorage::all() : TrajectoryStorage::at(s.checkpoints);
  const auto trajectory = run_trajectory(stepper, u0, aggregate_increments(noise, s.steps), storage);

  auto mesh_out = open_output(config, "mesh.csv");
  write_mesh_csv(mesh_out, mesh);
  auto path_out = open_output(config, "path.csv");
  write_noise_path_csv(path_out, noise);
  auto traj_out = open_output(config, "trajectory.csv");
  write_trajectory_csv(traj_out, trajectory, &u0);
  write_manifest(config);
  const bool finite = trajectory.final_state().allFinite();
  std::cout << "simulated " << s.steps << " steps (" << to_string(s.variant) << ") on " << mesh.size()
            << " cells; final mean " << format_double(cell_mean(trajectory.final_state())) << '\n';
  return finite ? kOk : kCheckFailed;
}

int cmd_expectation(const RunConfig& config) {
  std::vector<ExpectationResult> results;
  bool finite = true;
  for (double a : config.study.amplitudes) {
    results.push_back(estimate_expectation(config.study, a));
    for (const auto& p : results.back().points) {
      finite = finite && std::isfinite(p.mean);
      std::cout << "a=" << format_double(a) << " n=" << p.step << " E=" << format_double(p.mean)
                << " |E(u0)-E|=" << format_double(p.absdiff) << '\n';
    }
  }
  if (!results.empty()) std::cout << "E(u0)=" << format_double(results.front().initial_mean) << '\n';
  auto out = open_output(config, "expectation.csv");
  write_expectation_csv(out, results);
  write_manifest(config);
  return finite ? kOk : kCheckFailed;
}

int write_curves(const RunConfig& config, const std::vector<ErrorCurve>& curves, const std::string& points_file) {
  bool finite = true;
  for (const auto& c : curves) {
    finite = finite && std::isfinite(c.fit.slope);
    std::cout << "a=" << format_double(c.amplitude) << " m=" << format_double(c.fit.slope) << '\n';
  }
  auto points = open_output(config, points_file);
  write_error_csv(points, curves);
  auto fit = open_output(config, "fit.csv");
  write_fit_csv(fit, curves);
  write_manifest(config);
  return finite ? kOk : kCheckFailed;
}

int cmd_convergence(const RunConfig& config) {
  std::vector<ErrorCurve> curves;
  for (double a : config.study.amplitudes) curves.push_back(estimate_error_curve(config.study, a));
  return write_curves(config, curves, "errors.csv");
}

int cmd_splitting_error(const RunConfig& config) {
  std::vector<ErrorCurve> curves;
  for (double a : config.study.amplitudes) curves.push_back(splitting_error_study(config.study, a));
  return write_curves(config, curves, "splitting_error.csv");
}

int cmd_validate(const RunConfig& config) {
  bool ok = true;
  const auto results = run_validation_suite(int(config.study.paths), config.study.seed);
  for (const auto& r : results) {
    ok = ok && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume splitting scheme for the stochastic Allen-Cahn equation with [0,1] constraint"};
  app.require_subcommand(1);
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Command commands[] = {
      {"table-repro", "recompute the 2x2 reference tables from an injected path", cmd_table_repro},
      {"simulate", "run one trajectory and dump mesh, path and trajectory CSVs", cmd_simulate},
      {"expectation", "Monte Carlo mean drift at checkpoints", cmd_expectation},
      {"convergence", "time-refinement error curves and fitted orders", cmd_convergence},
      {"splitting-error", "coupled vs splitting deviation and its order in tau", cmd_splitting_error},
      {"validate", "randomized invariant suite and reference tables", cmd_validate},
  };
  CommonOptions options;
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, options);
    subs.emplace_back(sub, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  for (const auto& [sub, command] : subs) {
    if (!sub->parsed()) continue;
    try {
      return command->run(resolve_config(command->name, options));
    } catch (const ConfigError& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return kConfigError;
    } catch (const NumericalFailure& e) {
      std::cerr << "numerical failure: " << e.what() << '\n';
      return kNumericalFailure;
    } catch (const IoError& e) {
      std::cerr << "I/O error: " << e.what() << '\n';
      return kIoError;
    }
  }
  return kConfigError;
}
