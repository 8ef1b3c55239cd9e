#include "pdpinn/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

namespace pdpinn {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment", {"problem", "preset", "seed", "deterministic", "threads", "output_dir"}},
      {"network", {"hidden_layers", "width"}},
      {"dictionary", {"kind", "k", "k1", "k2", "l_max", "lift"}},
      {"training", {"iterations", "n_pde", "n_bc", "n_pred", "lr", "record_every"}},
  };
  return keys;
}

long long parse_integer(const std::string& field, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size()) {
    throw ConfigError(field, "expected an integer, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& field, const std::string& text) {
  const long long v = parse_integer(field, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(field, "value out of range: " + text);
  }
  return static_cast<int>(v);
}

std::uint64_t parse_seed(const std::string& field, const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || text.front() == '-') {
    throw ConfigError(field, "expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& field, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size()) {
    throw ConfigError(field, "expected a number, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& field, std::string text) {
  boost::to_lower(text);
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError(field, "expected true or false, got '" + text + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::preset(const std::string& name) {
  std::string base = name;
  const bool baseline = boost::ends_with(name, "-pinn");
  if (baseline) base = name.substr(0, name.size() - 5);
  Problem problem = [&] {
    try {
      return Problem::from_name(base);
    } catch (const std::exception&) {
      throw ConfigError("preset", "unknown preset '" + name + "'");
    }
  }();
  const ProblemDefaults d = problem.defaults();
  ExperimentConfig c;
  c.problem = problem.name();
  c.dictionary = d.dictionary;
  c.lift = d.lift;
  c.hidden_layers = 3;
  c.width = 50;
  c.iterations = d.iterations;
  c.n_pde = d.n_pde;
  c.n_bc = d.n_bc;
  c.n_pred = 1000;
  c.output_dir = "runs/" + name;
  if (baseline) {
    c.dictionary = DictionarySpec::none();
    c.hidden_layers = 4;
  }
  return c;
}

std::vector<std::string> ExperimentConfig::preset_names() {
  return {"poisson1d",      "poisson2d",      "sphere",      "diffusion",
          "poisson1d-pinn", "poisson2d-pinn", "sphere-pinn", "diffusion-pinn"};
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", std::string("malformed INI: ") + e.message() + " at line " +
                                    std::to_string(e.line()));
  }

  std::map<std::string, std::string> values;
  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (known == known_keys().end()) {
      if (body.empty()) throw ConfigError(section, "keys must live inside a [section]");
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, value] : body) {
      const std::string field = section + "." + key;
      if (!known->second.contains(key)) throw ConfigError(field, "unknown key");
      values[field] = boost::trim_copy(value.data());
    }
  }
  auto get = [&](const std::string& field) -> std::optional<std::string> {
    const auto it = values.find(field);
    if (it == values.end()) return std::nullopt;
    return it->second;
  };

  ExperimentConfig c;
  if (auto preset_name = get("experiment.preset")) {
    try {
      c = preset(*preset_name);
    } catch (const ConfigError&) {
      throw ConfigError("experiment.preset", "unknown preset '" + *preset_name + "'");
    }
    if (auto p = get("experiment.problem")) {
      c.problem = *p;
    }
  } else if (auto p = get("experiment.problem")) {
    try {
      c = preset(Problem::from_name(*p).name());
    } catch (const std::exception&) {
      throw ConfigError("experiment.problem", "unknown problem '" + *p + "'");
    }
    c.output_dir = "runs";
  } else {
    c = preset("poisson1d");
    c.output_dir = "runs";
  }

  if (auto v = get("experiment.seed")) c.seed = parse_seed("experiment.seed", *v);
  if (auto v = get("experiment.deterministic")) {
    c.deterministic = parse_bool("experiment.deterministic", *v);
  }
  if (auto v = get("experiment.threads")) c.threads = parse_int("experiment.threads", *v);
  if (auto v = get("experiment.output_dir")) c.output_dir = *v;
  if (auto v = get("network.hidden_layers")) c.hidden_layers = parse_int("network.hidden_layers", *v);
  if (auto v = get("network.width")) c.width = parse_int("network.width", *v);

  if (auto v = get("dictionary.kind")) {
    if (v->find(':') != std::string::npos) {
      try {
        c.dictionary = DictionarySpec::parse(*v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("dictionary.kind", e.what());
      }
    } else {
      DictionaryKind kind;
      try {
        kind = parse_dictionary_kind(boost::trim_copy(*v));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("dictionary.kind", e.what());
      }
      if (kind != c.dictionary.kind) {
        c.dictionary = DictionarySpec{};
        c.dictionary.kind = kind;
      }
    }
  }
  if (auto v = get("dictionary.k")) c.dictionary.k = parse_int("dictionary.k", *v);
  if (auto v = get("dictionary.k1")) c.dictionary.k1 = parse_int("dictionary.k1", *v);
  if (auto v = get("dictionary.k2")) c.dictionary.k2 = parse_int("dictionary.k2", *v);
  if (auto v = get("dictionary.l_max")) c.dictionary.l_max = parse_int("dictionary.l_max", *v);
  if (auto v = get("dictionary.lift")) c.lift = parse_bool("dictionary.lift", *v);

  if (auto v = get("training.iterations")) c.iterations = parse_int("training.iterations", *v);
  if (auto v = get("training.n_pde")) c.n_pde = parse_int("training.n_pde", *v);
  if (auto v = get("training.n_bc")) c.n_bc = parse_int("training.n_bc", *v);
  if (auto v = get("training.n_pred")) c.n_pred = parse_int("training.n_pred", *v);
  if (auto v = get("training.lr")) c.lr = parse_real("training.lr", *v);
  if (auto v = get("training.record_every")) {
    c.record_every = parse_int("training.record_every", *v);
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  return parse(in);
}

void ExperimentConfig::validate() const {
  Problem p = [&] {
    try {
      return Problem::from_name(problem);
    } catch (const std::exception&) {
      throw ConfigError("experiment.problem", "unknown problem '" + problem + "'");
    }
  }();
  if (threads < 1) throw ConfigError("experiment.threads", "must be >= 1");
  if (hidden_layers < 1) throw ConfigError("network.hidden_layers", "must be >= 1");
  if (width < 1) throw ConfigError("network.width", "must be >= 1");
  if (iterations < 0) throw ConfigError("training.iterations", "must be >= 0");
  if (n_pde < 1) throw ConfigError("training.n_pde", "must be >= 1");
  if (n_bc < 1) throw ConfigError("training.n_bc", "must be >= 1");
  if (n_pred < 1) throw ConfigError("training.n_pred", "must be >= 1");
  if (record_every < 1) throw ConfigError("training.record_every", "must be >= 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("training.lr", "must be a positive number");
  if (lift && p.id() != ProblemId::sphere) {
    throw ConfigError("dictionary.lift", "lifting only applies to the sphere problem");
  }
  try {
    dictionary.validate();
  } catch (const std::invalid_argument& e) {
    const char* field = "dictionary.kind";
    switch (dictionary.kind) {
      case DictionaryKind::fourier1d:
      case DictionaryKind::diffusion_fourier:
        field = "dictionary.k";
        break;
      case DictionaryKind::fourier2d:
        field = dictionary.k1 < 1 ? "dictionary.k1" : "dictionary.k2";
        break;
      case DictionaryKind::spherical_harmonics:
        field = "dictionary.l_max";
        break;
      case DictionaryKind::none:
        break;
    }
    throw ConfigError(field, e.what());
  }
  if (dictionary.input_dim() > p.dim()) {
    throw ConfigError("dictionary.kind", "dictionary " + dictionary.to_string() +
                                             " does not apply to " + p.name());
  }
}

std::vector<int> ExperimentConfig::hidden_widths() const {
  return std::vector<int>(static_cast<std::size_t>(hidden_layers), width);
}

TrainConfig ExperimentConfig::train_config() const {
  TrainConfig t;
  t.iterations = iterations;
  t.n_pde = n_pde;
  t.n_bc = n_bc;
  t.n_pred = n_pred;
  t.record_every = record_every;
  t.seed = seed;
  t.adam.lr = lr;
  t.exec.deterministic = deterministic;
  t.exec.threads = threads;
  return t;
}

Model ExperimentConfig::initial_model() const {
  validate();
  return Model::initialize(Problem::from_name(problem), dictionary, lift, hidden_widths(), seed);
}

std::string ExperimentConfig::to_ini() const {
  std::ostringstream os;
  os << "[experiment]\n"
     << "problem = " << problem << '\n'
     << "seed = " << seed << '\n'
     << "deterministic = " << (deterministic ? "true" : "false") << '\n'
     << "threads = " << threads << '\n'
     << "output_dir = " << output_dir << "\n\n"
     << "[network]\n"
     << "hidden_layers = " << hidden_layers << '\n'
     << "width = " << width << "\n\n"
     << "[dictionary]\n"
     << "kind = " << dictionary.to_string() << '\n'
     << "lift = " << (lift ? "true" : "false") << "\n\n"
     << "[training]\n"
     << "iterations = " << iterations << '\n'
     << "n_pde = " << n_pde << '\n'
     << "n_bc = " << n_bc << '\n'
     << "n_pred = " << n_pred << '\n'
     << "lr = " << format_double(lr) << '\n'
     << "record_every = " << record_every << '\n';
  return os.str();
}

nlohmann::json ExperimentConfig::to_json() const {
  return nlohmann::json{
      {"problem", problem},
      {"dictionary", dictionary.to_string()},
      {"lift", lift},
      {"hidden_layers", hidden_layers},
      {"width", width},
      {"iterations", iterations},
      {"n_pde", n_pde},
      {"n_bc", n_bc},
      {"n_pred", n_pred},
      {"record_every", record_every},
      {"lr", lr},
      {"seed", seed},
      {"deterministic", deterministic},
      {"threads", threads},
      {"output_dir", output_dir},
  };
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_train_csv_header(std::ostream& out) {
  out << "iteration,loss_pde,loss_bc,error_predict,elapsed_s\n";
}

void write_train_csv_row(std::ostream& out, const TrainRecord& r) {
  out << r.iteration << ',' << format_double(r.loss_pde) << ',' << format_double(r.loss_bc) << ','
      << format_double(r.error_predict) << ',' << format_double(r.elapsed) << '\n';
}

RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                         const RecordCallback& on_record) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);
  RunResult result;
  result.train_csv = out_dir / "train.csv";
  result.summary_json = out_dir / "summary.json";
  result.checkpoint = out_dir / "model.ckpt";

  std::ofstream csv(result.train_csv, std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot write " + result.train_csv.string());
  write_train_csv_header(csv);
  const RecordCallback record = [&](const TrainRecord& r) {
    write_train_csv_row(csv, r);
    csv.flush();
    result.final_record = r;
    if (on_record) on_record(r);
  };

  std::optional<Model> trained;
  try {
    trained = train(cfg.initial_model(), cfg.train_config(), record).model;
  } catch (const DivergenceError& e) {
    result.diverged = true;
    result.message = e.what();
    result.final_record = e.last();
  } catch (const NonFiniteResidual& e) {
    result.diverged = true;
    result.message = e.what();
  }

  nlohmann::json summary;
  summary["status"] = result.diverged ? "diverged" : "ok";
  summary["config"] = cfg.to_json();
  summary["final"] = {
      {"iteration", result.final_record.iteration},
      {"loss_pde", result.final_record.loss_pde},
      {"loss_bc", result.final_record.loss_bc},
      {"error_predict", result.final_record.error_predict},
      {"elapsed_s", result.final_record.elapsed},
  };
  summary["train_csv"] = result.train_csv.string();
  if (trained) {
    save_checkpoint(Checkpoint::from_model(*trained), result.checkpoint);
    summary["checkpoint"] = result.checkpoint.string();
  } else {
    summary["checkpoint"] = nullptr;
    summary["message"] = result.message;
    result.checkpoint.clear();
  }
  std::ofstream js(result.summary_json, std::ios::trunc);
  if (!js) throw std::runtime_error("cannot write " + result.summary_json.string());
  js << summary.dump(2) << '\n';
  return result;
}

std::vector<std::string> coordinate_names(const Problem& p) {
  switch (p.id()) {
    case ProblemId::poisson1d:
      return {"x"};
    case ProblemId::poisson2d:
      return {"x", "y"};
    case ProblemId::sphere:
      return {"theta", "phi"};
    case ProblemId::diffusion:
      return {"x", "t"};
  }
  return {};
}

int default_grid_resolution(const Problem& p) { return p.dim() == 1 ? 1000 : 200; }

namespace {

Problem checked_problem(const Checkpoint& ckpt, const std::string& problem) {
  const Problem requested = Problem::from_name(problem);
  if (requested.name() != ckpt.make_problem().name()) {
    throw CheckpointError("checkpoint was trained on " + ckpt.problem + ", not " + requested.name());
  }
  return requested;
}

}  // namespace

void dump_grid(const Checkpoint& ckpt, const std::string& problem, int resolution,
               const std::filesystem::path& out) {
  const Problem p = checked_problem(ckpt, problem);
  if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
  const Field f = ckpt.field();
  std::ofstream os(out, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + out.string());
  for (const auto& name : coordinate_names(p)) os << name << ',';
  os << "prediction,ground_truth,abs_error\n";

  const auto& box = p.bounds();
  const int dim = p.dim();
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> x(static_cast<std::size_t>(dim));
  while (true) {
    for (int k = 0; k < dim; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      x[kk] = box[kk].lo + box[kk].length() * idx[kk] / (resolution - 1);
    }
    const double pred = f(x).value;
    const double truth = p.ground_truth(x);
    for (double v : x) os << format_double(v) << ',';
    os << format_double(pred) << ',' << format_double(truth) << ','
       << format_double(std::abs(pred - truth)) << '\n';
    // last coordinate varies fastest
    int k = dim - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == resolution) {
      idx[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  if (!os) throw std::runtime_error("failed writing " + out.string());
}

BoundReport bounds_report(const Checkpoint& ckpt, const std::string& problem,
                          const BoundOptions& opts) {
  const Problem p = checked_problem(ckpt, problem);
  return verify_bound(p, ckpt.field(), opts);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + " is empty");
  boost::split(table.header, line, boost::is_any_of(","));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    boost::split(cells, line, boost::is_any_of(","));
    if (cells.size() != table.header.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(table.header.size()) + " columns");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      row.push_back(parse_real(path.string() + ":" + std::to_string(lineno), c));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<TrainRecord> read_train_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::vector<std::string> expected = {"iteration", "loss_pde", "loss_bc", "error_predict",
                                             "elapsed_s"};
  if (t.header != expected) throw std::runtime_error(path.string() + ": unexpected header");
  std::vector<TrainRecord> out;
  for (const auto& row : t.rows) {
    out.push_back({static_cast<int>(row[0]), row[1], row[2], row[3], row[4]});
  }
  return out;
}

}  // namespace pdpinn
