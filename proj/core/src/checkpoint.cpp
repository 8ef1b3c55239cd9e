#include "pdpinn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pdpinn {

namespace {

constexpr char kMagic[8] = {'P', 'D', 'P', 'I', 'N', 'N', 'C', 'K'};

template <typename U>
void put_le(std::string& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename U>
  U get(const char* what) {
    need(sizeof(U), what);
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      v |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(U);
    return v;
  }

  std::string take(std::size_t n, const char* what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw CheckpointError(std::string("truncated checkpoint while reading ") + what);
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Checkpoint Checkpoint::from_model(const Model& model) {
  Checkpoint c;
  c.kind = CheckpointKind::network;
  c.problem = model.problem().name();
  c.dictionary = model.dictionary();
  c.lift = model.lift();
  c.dims = model.params().layout().dims();
  const auto flat = model.params().flat();
  c.params.assign(flat.begin(), flat.end());
  return c;
}

Checkpoint Checkpoint::oracle(const Problem& problem) {
  Checkpoint c;
  c.kind = CheckpointKind::oracle;
  c.problem = problem.name();
  return c;
}

Problem Checkpoint::make_problem() const { return Problem::from_name(problem); }

Model Checkpoint::model() const {
  if (kind == CheckpointKind::oracle) {
    throw CheckpointError("oracle checkpoints hold no network parameters");
  }
  if (dims.size() < 2) throw CheckpointError("checkpoint has fewer than two layer dimensions");
  for (int d : dims) {
    if (d < 1) throw CheckpointError("checkpoint has a non-positive layer dimension");
  }
  MlpLayout layout(dims);
  if (layout.parameter_count() != params.size()) {
    throw CheckpointError("checkpoint holds " + std::to_string(params.size()) +
                          " parameters but its layer dimensions need " +
                          std::to_string(layout.parameter_count()));
  }
  try {
    return Model(make_problem(), dictionary, lift, ParamStore(layout, params));
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("checkpoint does not fit its problem: ") + e.what());
  }
}

Field Checkpoint::field() const {
  if (kind == CheckpointKind::oracle) return ground_truth_field(make_problem());
  return model().field();
}

std::string encode_checkpoint(const Checkpoint& ckpt) {
  std::string out(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.kind));
  const std::string meta = nlohmann::json{{"problem", ckpt.problem},
                                          {"dictionary", ckpt.dictionary.to_string()},
                                          {"lift", ckpt.lift}}
                               .dump();
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
  out += meta;
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.dims.size()));
  for (int d : ckpt.dims) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  put_le<std::uint64_t>(out, ckpt.params.size());
  for (double v : ckpt.params) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  Reader in(bytes);
  if (in.take(sizeof kMagic, "magic") != std::string(kMagic, sizeof kMagic)) {
    throw CheckpointError("not a pdpinn checkpoint (bad magic)");
  }
  const auto version = in.get<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint c;
  const auto kind = in.get<std::uint32_t>("kind");
  if (kind > 1) throw CheckpointError("unknown checkpoint kind " + std::to_string(kind));
  c.kind = static_cast<CheckpointKind>(kind);

  const auto meta_len = in.get<std::uint32_t>("metadata length");
  try {
    const auto meta = nlohmann::json::parse(in.take(meta_len, "metadata"));
    c.problem = meta.at("problem").get<std::string>();
    c.dictionary = DictionarySpec::parse(meta.at("dictionary").get<std::string>());
    c.lift = meta.at("lift").get<bool>();
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("bad checkpoint metadata: ") + e.what());
  }

  const auto ndims = in.get<std::uint32_t>("dimension count");
  for (std::uint32_t i = 0; i < ndims; ++i) {
    c.dims.push_back(static_cast<std::int32_t>(in.get<std::uint32_t>("dimensions")));
  }
  const auto nparams = in.get<std::uint64_t>("parameter count");
  if (nparams > bytes.size() / 8) throw CheckpointError("truncated checkpoint while reading parameters");
  c.params.reserve(nparams);
  for (std::uint64_t i = 0; i < nparams; ++i) {
    c.params.push_back(std::bit_cast<double>(in.get<std::uint64_t>("parameters")));
  }
  if (!in.at_end()) throw CheckpointError("trailing bytes after checkpoint parameters");
  return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  const std::string bytes = encode_checkpoint(ckpt);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_checkpoint(buf.str());
}

}  // namespace pdpinn
