// agrosim: airborne attitude stabilization scenarios for a 4WIDS robot.
//
//   agrosim run --preset fl-paper --out results/
//   agrosim compare --preset fl-paper --preset bs-paper
//   agrosim sweep --preset bs-paper --param K1 --values 5,10,20,40

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "agrosim/cli.hpp"

namespace {

using agrosim::cli::RunManifest;

struct CommonOptions {
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
  bool no_svg = false;
  bool no_csv = false;
  bool no_metrics = false;
  std::string name;

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "Output directory (default: $AGROSIM_OUT or .)");
    cmd->add_option("--seed", seed, "Override the disturbance seed");
    cmd->add_option("--dt", dt, "Override the integration step (s)")->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", horizon, "Override the simulated horizon (s)");
    cmd->add_flag("--no-svg", no_svg, "Skip the SVG plot");
  }

  std::filesystem::path out() const {
    return out_dir.empty() ? agrosim::cli::default_out_dir() : std::filesystem::path(out_dir);
  }

  agrosim::cli::EmitFlags emit() const { return {!no_csv, !no_svg, !no_metrics}; }

  RunManifest manifest() const {
    RunManifest m;
    m.name = name;
    m.out_dir = out();
    m.emit = emit();
    m.seed = seed;
    m.dt = dt;
    m.horizon = horizon;
    return m;
  }
};

std::string preset_help() {
  std::string s = "Named scenario:";
  for (const auto& n : agrosim::preset_names()) s += " " + n;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Airborne attitude stabilization simulator (PD+FL and adaptive backstepping)"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string run_preset, run_config;
  auto* run = app.add_subcommand("run", "Simulate one scenario; write CSV, metrics JSON and SVG");
  run->add_option("--preset", run_preset, preset_help());
  run->add_option("--config", run_config, "JSON scenario file")->check(CLI::ExistingFile);
  run->add_option("--name", run_opts.name, "Output file stem (default: scenario name)");
  run->add_flag("--no-csv", run_opts.no_csv, "Skip the trajectory CSV");
  run->add_flag("--no-metrics", run_opts.no_metrics, "Skip the metrics JSON");
  run_opts.attach(run);

  CommonOptions cmp_opts;
  std::vector<std::string> cmp_presets, cmp_configs;
  auto* compare = app.add_subcommand("compare", "Run two scenarios from the same start and overlay them");
  compare->add_option("--preset", cmp_presets, preset_help() + " (repeatable)");
  compare->add_option("--config", cmp_configs, "JSON scenario file (repeatable)")->check(CLI::ExistingFile);
  cmp_opts.attach(compare);

  CommonOptions sweep_opts;
  std::string sweep_preset, sweep_config, sweep_param;
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Grid over one gain, emitting a metrics table");
  sweep->add_option("--preset", sweep_preset, preset_help());
  sweep->add_option("--config", sweep_config, "JSON scenario file")->check(CLI::ExistingFile);
  sweep->add_option("--param", sweep_param, "Gain to vary: k1, k2 (fl) or K1, K2, Gamma, Lambda, Sigma")
      ->required();
  sweep->add_option("--values", sweep_values, "Comma-separated gain values")->required()->delimiter(',');
  sweep_opts.attach(sweep);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    RunManifest m = run_opts.manifest();
    if (!run_preset.empty()) m.preset = run_preset;
    if (!run_config.empty()) m.config_path = run_config;
    return agrosim::cli::cmd_run(m, std::cout, std::cerr);
  }
  if (compare->parsed()) {
    std::vector<RunManifest> sources;
    for (const auto& p : cmp_presets) {
      RunManifest m = cmp_opts.manifest();
      m.preset = p;
      sources.push_back(m);
    }
    for (const auto& c : cmp_configs) {
      RunManifest m = cmp_opts.manifest();
      m.config_path = c;
      sources.push_back(m);
    }
    if (sources.size() != 2) {
      std::cerr << "error: compare needs exactly two scenarios (--preset/--config)\n";
      return 2;
    }
    return agrosim::cli::cmd_compare(sources[0], sources[1], cmp_opts.out(), cmp_opts.emit(), std::cout, std::cerr);
  }
  RunManifest m = sweep_opts.manifest();
  if (!sweep_preset.empty()) m.preset = sweep_preset;
  if (!sweep_config.empty()) m.config_path = sweep_config;
  return agrosim::cli::cmd_sweep(m, sweep_param, sweep_values, std::cout, std::cerr);
}
