#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pdpinn/bounds.hpp"
#include "pdpinn/checkpoint.hpp"
#include "pdpinn/experiment.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitDiverged = 2;

fs::path default_output_root() {
  if (const char* env = std::getenv("PDPINN_OUTPUT_DIR"); env && *env) return env;
  return {};
}

int cmd_run(const std::string& config_path, const std::string& preset, std::optional<std::uint64_t> seed,
            std::optional<bool> deterministic, const std::string& out, bool quiet) {
  pdpinn::ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = pdpinn::ExperimentConfig::load(config_path);
  } else {
    cfg = pdpinn::ExperimentConfig::preset(preset.empty() ? "poisson1d" : preset);
  }
  if (seed) cfg.seed = *seed;
  if (deterministic) cfg.deterministic = *deterministic;
  cfg.validate();

  fs::path dir = cfg.output_dir;
  if (!out.empty()) {
    dir = out;
  } else if (const fs::path root = default_output_root(); !root.empty() && dir.is_relative()) {
    dir = root / dir;
  }

  const auto progress = [&](const pdpinn::TrainRecord& r) {
    if (quiet) return;
    std::printf("iter %6d  loss_pde %.4e  loss_bc %.4e  error_predict %.4e  %.1fs\n", r.iteration,
                r.loss_pde, r.loss_bc, r.error_predict, r.elapsed);
    std::fflush(stdout);
  };
  const pdpinn::RunResult result = pdpinn::run_experiment(cfg, dir, progress);
  if (result.diverged) {
    std::cerr << "error: " << result.message << '\n';
    return kExitDiverged;
  }
  std::cout << "wrote " << result.train_csv.string() << ", " << result.summary_json.string() << ", "
            << result.checkpoint.string() << '\n';
  return 0;
}

int cmd_dump_grid(const std::string& checkpoint, const std::string& problem, int resolution,
                  const std::string& out) {
  const pdpinn::Checkpoint ckpt = pdpinn::load_checkpoint(checkpoint);
  const std::string name = problem.empty() ? ckpt.problem : problem;
  if (resolution <= 0) resolution = pdpinn::default_grid_resolution(pdpinn::Problem::from_name(name));
  fs::path path = out.empty() ? fs::path(checkpoint).replace_filename("grid.csv") : fs::path(out);
  pdpinn::dump_grid(ckpt, name, resolution, path);
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

int cmd_bounds(const std::string& checkpoint, const std::string& problem, std::uint64_t seed,
               const std::string& out) {
  const pdpinn::Checkpoint ckpt = pdpinn::load_checkpoint(checkpoint);
  pdpinn::BoundOptions opts;
  opts.seed = seed;
  const pdpinn::BoundReport report =
      pdpinn::bounds_report(ckpt, problem.empty() ? ckpt.problem : problem, opts);
  std::cout << pdpinn::format_table(report);
  if (!out.empty()) {
    std::ofstream js(out, std::ios::trunc);
    if (!js) throw std::runtime_error("cannot write " + out);
    js << pdpinn::to_json(report).dump(2) << '\n';
    std::cout << "wrote " << out << '\n';
  }
  return report.holds_sup && report.holds_exp ? 0 : 1;
}

int cmd_regularity(const std::string& domain, int resolution, int grid) {
  const auto d = pdpinn::DomainDescriptor::parse(domain);
  const double r = pdpinn::estimate_regularity(d, resolution, grid);
  std::printf("%s %.10f\n", d.to_string().c_str(), r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics-informed networks with prior dictionaries"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<bool> deterministic;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Train one experiment");
  run->add_option("--config", config_path, "INI experiment config")->check(CLI::ExistingFile);
  run->add_option("--preset", preset, "Built-in setting (poisson1d, sphere-pinn, ...)");
  run->add_option("--seed", seed, "Override the seed");
  run->add_option("--deterministic", deterministic, "Fixed-order reductions (true/false)");
  run->add_option("--out", out, "Output directory (default: config output_dir, under $PDPINN_OUTPUT_DIR)");
  run->add_flag("-q,--quiet", quiet, "Do not print progress");
  run->get_option("--config")->excludes("--preset");

  std::string checkpoint;
  std::string problem;
  int resolution = 0;
  std::string grid_out;
  auto* dump = app.add_subcommand("dump-grid", "Write predictions on a regular grid as CSV");
  dump->add_option("checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  dump->add_option("--problem", problem, "Problem the checkpoint must match");
  dump->add_option("--resolution", resolution, "Points per axis (default 1000 in 1-D, else 200)");
  dump->add_option("--out", grid_out, "CSV path (default: grid.csv beside the checkpoint)");

  std::string bounds_ckpt;
  std::string bounds_problem;
  std::string bounds_out;
  std::uint64_t bounds_seed = pdpinn::BoundOptions{}.seed;
  auto* bounds = app.add_subcommand("bounds", "Error-bound report for a Poisson checkpoint");
  bounds->add_option("checkpoint", bounds_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);
  bounds->add_option("--problem", bounds_problem, "Problem the checkpoint must match");
  bounds->add_option("--seed", bounds_seed, "Sampling seed");
  bounds->add_option("--out", bounds_out, "Also write the report as JSON");

  std::string domain = "cube";
  int mc_points = 100000;
  int grid = 11;
  auto* reg = app.add_subcommand("regularity", "Regularity constant of a domain");
  reg->add_option("domain", domain, "interval, square, cube, disk, interval:a,b, box:..., disk:cx,cy,r");
  reg->add_option("--mc-points", mc_points, "Quadrature cells per intersection");
  reg->add_option("--grid", grid, "Centres per axis");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, preset, seed, deterministic, out, quiet);
    if (*dump) return cmd_dump_grid(checkpoint, problem, resolution, grid_out);
    if (*bounds) return cmd_bounds(bounds_ckpt, bounds_problem, bounds_seed, bounds_out);
    if (*reg) return cmd_regularity(domain, mc_points, grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
