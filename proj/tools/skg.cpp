// Command-line front end: kernels | solve | perturb | trees | simulate | validate.
// Every run resolves defaults -> config file -> flags, writes CSV outputs plus
// a manifest.json into --out, and is byte-reproducible for fixed (config, seed).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skg/config.hpp"
#include "skg/csv.hpp"
#include "skg/duhamel.hpp"
#include "skg/errors.hpp"
#include "skg/kernels.hpp"
#include "skg/lattice.hpp"
#include "skg/manifest.hpp"
#include "skg/perturbation.hpp"
#include "skg/rng.hpp"
#include "skg/simulator.hpp"
#include "skg/trees.hpp"
#include "skg/validate.hpp"
#include "skg/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 2;
constexpr int kExitNumericalFailure = 3;
constexpr int kExitConfigError = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  skg::ConfigMap overrides;
};

// Raw flag text flows into the same parser the config file uses, so types and
// ranges are enforced in exactly one place.
void bind_setting(CLI::App* cmd, CommonArgs& args, const std::string& flag,
                  const std::string& key, const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&args, key](const std::string& value) { args.overrides[key] = value; }, help);
}

void bind_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key=value configuration file");
  cmd->add_option("--out", args.out_dir, "output directory (created if absent)");
  bind_setting(cmd, args, "--seed", "seed", "master seed for all random streams");
  bind_setting(cmd, args, "--dim", "dim", "lattice dimension");
  bind_setting(cmd, args, "--n-sites", "n_sites", "sites per axis");
  bind_setting(cmd, args, "--delta", "delta", "lattice spacing");
  bind_setting(cmd, args, "--gamma", "gamma", "damping coefficient");
  bind_setting(cmd, args, "--mu2", "mu2", "mass-squared term");
  bind_setting(cmd, args, "--lambda", "lambda", "nonlinear coupling");
  bind_setting(cmd, args, "--power", "power", "nonlinearity exponent p");
  bind_setting(cmd, args, "--sigma", "sigma", "noise strength");
  bind_setting(cmd, args, "--dt", "dt", "time step");
  bind_setting(cmd, args, "--horizon", "horizon", "final time T");
  bind_setting(cmd, args, "--order", "order", "expansion truncation order J");
  bind_setting(cmd, args, "--tol", "tol", "fixed-point residual tolerance");
  bind_setting(cmd, args, "--max-iter", "max_iter", "fixed-point iteration cap");
  bind_setting(cmd, args, "--record-every", "record_every", "observable recording stride");
  bind_setting(cmd, args, "--ensemble", "ensemble", "number of independent trajectories");
  bind_setting(cmd, args, "--init-amplitude", "init_amplitude", "initial fluctuation amplitude");
  bind_setting(cmd, args, "--snapshot-times", "snapshot_times", "comma-separated snapshot times");
}

skg::RunManifest open_manifest(const std::string& subcommand, const skg::RunSettings& settings) {
  skg::RunManifest manifest;
  manifest.tool_version = skg::kVersion;
  manifest.subcommand = subcommand;
  manifest.seed = settings.seed;
  manifest.config = settings.snapshot();
  manifest.started_utc = skg::utc_timestamp_now();
  return manifest;
}

void close_manifest(skg::RunManifest& manifest, const std::string& out_dir) {
  manifest.finished_utc = skg::utc_timestamp_now();
  skg::write_manifest(manifest, out_dir);
}

std::string time_tag(double t) {
  std::string tag = skg::format_double(t);
  for (char& c : tag)
    if (c == '.') c = 'p';
  return tag;
}

int cmd_kernels(const CommonArgs& args) {
  const skg::RunSettings settings = skg::resolve_settings(args.config_path, args.overrides);
  std::filesystem::create_directories(args.out_dir);
  skg::RunManifest manifest = open_manifest("kernels", settings);

  const skg::LatticeSpec spec = settings.lattice();
  const skg::TimeGrid grid = settings.grid();
  const skg::DispersionTable table = skg::build_dispersion(spec, settings.params());

  {
    skg::CsvWriter modes(std::filesystem::path(args.out_dir) / "kernel_modes.csv",
                         {"time", "mode", "omega2", "C", "S"});
    for (std::int64_t n = 0; n <= grid.steps; ++n) {
      const skg::KernelSlice slice = skg::kernel_slice(table, grid.time_at(n));
      for (std::size_t k = 0; k < table.mode_count(); ++k)
        modes.row(slice.time, k, table.omega2[k], slice.c_modes[k], slice.s_modes[k]);
    }
    modes.close();
  }
  {
    skg::CsvWriter position(std::filesystem::path(args.out_dir) / "kernel_position.csv",
                            {"time", "site", "C", "S"});
    for (std::int64_t n = 0; n <= grid.steps; ++n) {
      const double t = grid.time_at(n);
      const skg::Field c = skg::kernel_position(table, t, skg::KernelKind::C);
      const skg::Field s = skg::kernel_position(table, t, skg::KernelKind::S);
      for (std::size_t i = 0; i < c.values.size(); ++i)
        position.row(t, i, c.values[i], s.values[i]);
    }
    position.close();
  }
  skg::add_output(manifest, args.out_dir, "kernel_modes.csv");
  skg::add_output(manifest, args.out_dir, "kernel_position.csv");
  close_manifest(manifest, args.out_dir);
  return kExitOk;
}

int cmd_solve(const CommonArgs& args) {
  const skg::RunSettings settings = skg::resolve_settings(args.config_path, args.overrides);
  std::filesystem::create_directories(args.out_dir);
  skg::RunManifest manifest = open_manifest("solve", settings);

  const skg::LatticeSpec spec = settings.lattice();
  const skg::ModelParams params = settings.params();
  const skg::TimeGrid grid = settings.grid();
  const skg::SimConfig sim = settings.sim_config();
  const skg::DispersionTable table = skg::build_dispersion(spec, params);

  const skg::Field f = skg::initial_fluctuation(sim);
  const skg::Field g = skg::Field::zeros(spec);
  const skg::NoiseRealization noise =
      skg::NoiseRealization::sample(spec, grid, params.sigma, settings.seed);
  const skg::PicardResult result =
      skg::picard_solve(f, g, noise.forcing(), params, table, grid,
                        static_cast<int>(settings.max_iter), settings.tol);

  skg::CsvWriter out(std::filesystem::path(args.out_dir) / "solution.csv",
                     {"time", "site", "phi"});
  for (std::size_t n = 0; n < result.phi.slices.size(); ++n) {
    const double t = grid.time_at(static_cast<std::int64_t>(n));
    const auto& values = result.phi.slices[n].values;
    for (std::size_t i = 0; i < values.size(); ++i) out.row(t, i, values[i]);
  }
  out.close();
  std::cout << "converged: residual " << skg::format_double(result.residual) << " after "
            << result.iterations << " evaluations\n";

  skg::add_output(manifest, args.out_dir, "solution.csv");
  close_manifest(manifest, args.out_dir);
  return kExitOk;
}

int cmd_perturb(const CommonArgs& args) {
  const skg::RunSettings settings = skg::resolve_settings(args.config_path, args.overrides);
  std::filesystem::create_directories(args.out_dir);
  skg::RunManifest manifest = open_manifest("perturb", settings);

  const skg::LatticeSpec spec = settings.lattice();
  const skg::ModelParams params = settings.params();
  const skg::TimeGrid grid = settings.grid();
  const skg::SimConfig sim = settings.sim_config();
  const skg::DispersionTable table = skg::build_dispersion(spec, params);

  const skg::Field f = skg::initial_fluctuation(sim);
  const skg::Field g = skg::Field::zeros(spec);
  const skg::NoiseRealization noise =
      skg::NoiseRealization::sample(spec, grid, params.sigma, settings.seed);
  const skg::SpaceTimeField xi = noise.forcing();

  const int max_order = static_cast<int>(settings.order);
  const auto orders = skg::compute_orders(max_order, f, g, xi, params, table, grid);
  {
    skg::CsvWriter out(std::filesystem::path(args.out_dir) / "orders.csv",
                       {"order", "sup_norm"});
    for (const auto& of : orders) out.row(of.order, skg::sup_norm(of.field));
    out.close();
  }
  {
    skg::CsvWriter out(std::filesystem::path(args.out_dir) / "remainder.csv",
                       {"lambda", "gap"});
    for (const double lam : {params.lambda, params.lambda / 2.0}) {
      skg::ModelParams at = params;
      at.lambda = lam;
      const skg::PicardResult pr = skg::picard_solve(
          f, g, xi, at, table, grid, static_cast<int>(settings.max_iter), settings.tol);
      const skg::SpaceTimeField truncated = skg::partial_sum(orders, lam);
      out.row(lam, skg::sup_distance(pr.phi, truncated));
    }
    out.close();
  }
  skg::add_output(manifest, args.out_dir, "orders.csv");
  skg::add_output(manifest, args.out_dir, "remainder.csv");
  close_manifest(manifest, args.out_dir);
  return kExitOk;
}

int cmd_trees(const CommonArgs& args, const std::string& dot_dir, bool verify) {
  const skg::RunSettings settings = skg::resolve_settings(args.config_path, args.overrides);
  std::filesystem::create_directories(args.out_dir);
  skg::RunManifest manifest = open_manifest("trees", settings);

  const int power = static_cast<int>(settings.power);
  const int order = static_cast<int>(settings.order);
  const auto forest = skg::enumerate_trees(power, order);
  {
    skg::CsvWriter out(std::filesystem::path(args.out_dir) / "trees.csv",
                       {"index", "encoding", "weight", "inner", "leaves_xi", "leaves_f",
                        "leaves_g", "degree_multiplicity"});
    for (std::size_t i = 0; i < forest.size(); ++i) {
      const auto& wt = forest[i];
      out.row(i, skg::encode_tree(wt.tree), wt.weight, wt.tree.inner_count(),
              wt.tree.leaf_count(skg::NodeKind::LeafXi), wt.tree.leaf_count(skg::NodeKind::LeafF),
              wt.tree.leaf_count(skg::NodeKind::LeafG), skg::degree_multiplicity(wt.tree));
    }
    out.close();
  }
  skg::add_output(manifest, args.out_dir, "trees.csv");

  if (!dot_dir.empty()) {
    std::filesystem::create_directories(dot_dir);
    for (std::size_t i = 0; i < forest.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "tree_%04zu.dot", i);
      std::ofstream dot(std::filesystem::path(dot_dir) / name, std::ios::binary);
      dot << skg::render_dot(forest[i]);
    }
    std::cout << "wrote " << forest.size() << " DOT files to " << dot_dir << "\n";
  }

  std::uint64_t weight_sum = 0;
  for (const auto& wt : forest) weight_sum += wt.weight;
  std::cout << "order " << order << ": " << forest.size() << " trees, weight sum " << weight_sum
            << "\n";

  int code = kExitOk;
  if (verify) {
    const skg::LatticeSpec spec{1, 8, 1.0};
    const skg::TimeGrid grid{0.05, 20};
    skg::ModelParams params = settings.params();
    const skg::DispersionTable table = skg::build_dispersion(spec, params);
    skg::NoiseStream stream(skg::derive_stream(settings.seed, 7));
    skg::Field f = skg::Field::zeros(spec);
    skg::Field g = skg::Field::zeros(spec);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      f.values[i] = 0.4 * stream.normal(2 * i);
      g.values[i] = 0.4 * stream.normal(2 * i + 1);
    }
    skg::SpaceTimeField xi = skg::SpaceTimeField::zeros(spec, grid);
    const std::uint64_t sites = spec.site_count();
    for (std::size_t n = 0; n < xi.slices.size(); ++n)
      for (std::uint64_t i = 0; i < sites; ++i)
        xi.slices[n].values[static_cast<std::size_t>(i)] =
            0.4 * stream.normal(1000000 + static_cast<std::uint64_t>(n) * sites + i);
    const auto orders = skg::compute_orders(order, f, g, xi, params, table, grid);
    double worst = 0.0;
    for (int j = 0; j <= order; ++j) {
      const skg::SpaceTimeField lhs = skg::tree_sum(power, j, f, g, xi, table, grid);
      worst = std::max(worst,
                       skg::sup_distance(lhs, orders[static_cast<std::size_t>(j)].field));
    }
    std::cout << "verify: max deviation between diagram sums and the order recursion = "
              << skg::format_double(worst) << "\n";
    if (!(worst <= 1e-9)) code = kExitValidationFailure;
  }
  close_manifest(manifest, args.out_dir);
  return code;
}

int cmd_simulate(const CommonArgs& args) {
  const skg::RunSettings settings = skg::resolve_settings(args.config_path, args.overrides);
  std::filesystem::create_directories(args.out_dir);
  skg::RunManifest manifest = open_manifest("simulate", settings);

  const skg::SimConfig cfg = settings.sim_config();
  if (cfg.dt_exceeds_stability()) std::cerr << "warning: " << cfg.stability_note() << "\n";

  const auto write_trace = [&](const skg::Trace& trace, const std::string& prefix) {
    const std::string trace_name = prefix.empty() ? "trace.csv" : prefix + "trace.csv";
    skg::CsvWriter out(std::filesystem::path(args.out_dir) / trace_name, {"time", "m", "var"});
    for (std::size_t i = 0; i < trace.times.size(); ++i)
      out.row(trace.times[i], trace.order_param[i], trace.variance[i]);
    out.close();
    skg::add_output(manifest, args.out_dir, trace_name);
    for (const auto& snap : trace.snapshots) {
      const std::string snap_name = prefix + "snapshot_t" + time_tag(snap.time) + ".csv";
      skg::CsvWriter sout(std::filesystem::path(args.out_dir) / snap_name, {"site", "value"});
      for (std::size_t i = 0; i < snap.field.values.size(); ++i)
        sout.row(i, snap.field.values[i]);
      sout.close();
      skg::add_output(manifest, args.out_dir, snap_name);
    }
  };

  if (cfg.ensemble == 1) {
    write_trace(skg::run(cfg), "");
  } else {
    const auto traces = skg::ensemble_run(cfg);
    for (std::size_t i = 0; i < traces.size(); ++i) {
      char prefix[32];
      std::snprintf(prefix, sizeof prefix, "member%03zu_", i);
      write_trace(traces[i], prefix);
    }
  }
  close_manifest(manifest, args.out_dir);
  return kExitOk;
}

int cmd_validate(const CommonArgs& args, const std::string& level_name) {
  const skg::RunSettings settings = skg::resolve_settings(args.config_path, args.overrides);
  std::filesystem::create_directories(args.out_dir);
  skg::RunManifest manifest = open_manifest("validate", settings);

  const skg::ValidationLevel level =
      level_name == "full" ? skg::ValidationLevel::Full : skg::ValidationLevel::Fast;
  const skg::ValidationReport report = skg::run_validation(level, settings.seed);
  for (const auto& check : report.checks) {
    std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << "  measured "
              << skg::format_double(check.measured) << "  tolerance "
              << skg::format_double(check.tolerance) << "\n";
  }
  {
    std::ofstream out(std::filesystem::path(args.out_dir) / "report.csv", std::ios::binary);
    out << skg::report_csv(report);
  }
  skg::add_output(manifest, args.out_dir, "report.csv");
  close_manifest(manifest, args.out_dir);
  return report.all_passed() ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice toolkit for the damped stochastic wave equation"};
  app.require_subcommand(1);

  CommonArgs kernels_args, solve_args, perturb_args, trees_args, simulate_args, validate_args;
  std::string dot_dir;
  bool verify = false;
  std::string level = "fast";

  CLI::App* kernels = app.add_subcommand("kernels", "dump mode and position kernels");
  bind_common(kernels, kernels_args);
  CLI::App* solve = app.add_subcommand("solve", "integral-equation solve by fixed-point iteration");
  bind_common(solve, solve_args);
  CLI::App* perturb = app.add_subcommand("perturb", "coupling expansion orders and remainders");
  bind_common(perturb, perturb_args);
  CLI::App* trees = app.add_subcommand("trees", "enumerate weighted interaction trees");
  bind_common(trees, trees_args);
  trees->add_option("--emit-dot", dot_dir, "directory for per-tree DOT files");
  trees->add_flag("--verify", verify, "check diagram sums against the order recursion");
  CLI::App* simulate = app.add_subcommand("simulate", "direct stochastic time stepping");
  bind_common(simulate, simulate_args);
  CLI::App* validate = app.add_subcommand("validate", "run the self-check suite");
  bind_common(validate, validate_args);
  validate->add_option("--level", level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (app.got_subcommand(kernels)) return cmd_kernels(kernels_args);
    if (app.got_subcommand(solve)) return cmd_solve(solve_args);
    if (app.got_subcommand(perturb)) return cmd_perturb(perturb_args);
    if (app.got_subcommand(trees)) return cmd_trees(trees_args, dot_dir, verify);
    if (app.got_subcommand(simulate)) return cmd_simulate(simulate_args);
    if (app.got_subcommand(validate)) return cmd_validate(validate_args, level);
  } catch (const skg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const skg::BlowUpError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const skg::NonConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
