#pragma once

// Binary parameter checkpoints.
//
// Layout (all integers and doubles little-endian):
//   8 bytes  magic "PDPINNCK"
//   u32      format version (1)
//   u32      kind: 0 = trained network, 1 = oracle (exact solution)
//   u32      metadata length, then that many bytes of JSON
//            {"problem", "dictionary", "lift"}
//   u32      number of layer dimensions, then each as i32
//   u64      number of parameters, then each as f64

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdpinn/model.hpp"

namespace pdpinn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

enum class CheckpointKind : std::uint32_t { network = 0, oracle = 1 };

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  CheckpointKind kind = CheckpointKind::network;
  std::string problem;
  DictionarySpec dictionary;
  bool lift = false;
  std::vector<int> dims;
  std::vector<double> params;

  static Checkpoint from_model(const Model& model);
  // A checkpoint whose predictor is the closed-form solution of `problem`.
  static Checkpoint oracle(const Problem& problem);

  Problem make_problem() const;
  // Throws CheckpointError for oracle checkpoints or inconsistent shapes.
  Model model() const;
  Field field() const;

  bool operator==(const Checkpoint&) const = default;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(const std::string& bytes);

}  // namespace pdpinn
