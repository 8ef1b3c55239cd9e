#pragma once

// Experiment configuration, runs and their on-disk artifacts.
//
// Config files are INI-style:
//
//   [experiment]
//   problem = poisson2d
//   seed = 7
//   deterministic = true
//   threads = 1
//   output_dir = runs/poisson2d
//
//   [network]
//   hidden_layers = 3
//   width = 50
//
//   [dictionary]
//   ; none | fourier1d | fourier2d | diffusion-fourier | spherical-harmonics
//   kind = fourier2d
//   k1 = 5
//   k2 = 5
//   lift = false
//
//   [training]
//   iterations = 1000
//   n_pde = 1000
//   n_bc = 400
//   n_pred = 1000
//   lr = 0.001
//   record_every = 10
//
// Comments take a whole line. Every key is optional; missing keys take the
// preset of the chosen problem (or of `preset = <name>` under [experiment]).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pdpinn/bounds.hpp"
#include "pdpinn/checkpoint.hpp"
#include "pdpinn/training.hpp"

namespace pdpinn {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  std::string problem = "poisson1d";
  DictionarySpec dictionary = DictionarySpec::fourier1d(8);
  bool lift = false;
  int hidden_layers = 3;
  int width = 50;
  int iterations = 1000;
  int n_pde = 100;
  int n_bc = 2;
  int n_pred = 1000;
  int record_every = 10;
  double lr = 1e-3;
  std::uint64_t seed = 1;
  bool deterministic = true;
  int threads = 1;
  std::string output_dir = "runs";

  // poisson1d, poisson2d, sphere, diffusion: the PD-PINN settings of each
  // benchmark. The same names with a "-pinn" suffix give the plain-PINN
  // baseline (no dictionary, 4 hidden layers).
  static ExperimentConfig preset(const std::string& name);
  static std::vector<std::string> preset_names();

  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig load(const std::filesystem::path& path);

  void validate() const;
  std::vector<int> hidden_widths() const;
  TrainConfig train_config() const;
  Model initial_model() const;

  std::string to_ini() const;
  nlohmann::json to_json() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct RunResult {
  TrainRecord final_record;
  std::filesystem::path train_csv;
  std::filesystem::path summary_json;
  std::filesystem::path checkpoint;
  bool diverged = false;
  std::string message;
};

// Trains and writes train.csv, summary.json and model.ckpt under out_dir.
// A diverging run still writes its CSV and summary (status "diverged") and
// returns with diverged = true.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                         const RecordCallback& on_record = {});

// Names of the coordinate columns of a problem, e.g. {"x", "t"}.
std::vector<std::string> coordinate_names(const Problem& p);

// Default resolution of dump_grid: 1000 points in 1-D, 200 per axis otherwise.
int default_grid_resolution(const Problem& p);

// Regular grid over the problem's coordinate box (theta, phi for the
// sphere) with columns coordinates..., prediction, ground_truth, abs_error.
void dump_grid(const Checkpoint& ckpt, const std::string& problem, int resolution,
               const std::filesystem::path& out);

BoundReport bounds_report(const Checkpoint& ckpt, const std::string& problem,
                          const BoundOptions& opts = {});

void write_train_csv_header(std::ostream& out);
void write_train_csv_row(std::ostream& out, const TrainRecord& r);
std::vector<TrainRecord> read_train_csv(const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

// %.17g
std::string format_double(double v);

}  // namespace pdpinn
