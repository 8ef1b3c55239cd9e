#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdpinn/tape.hpp"

namespace pdpinn {

// Layer dimensions d_0 (input), d_1 ... d_D (output) and the offsets of each
// layer's weights and bias inside the flat parameter vector. Layer i has a
// row-major d_i x d_{i-1} weight matrix followed by a d_i bias.
class MlpLayout {
 public:
  MlpLayout() = default;
  explicit MlpLayout(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  int layer_count() const { return static_cast<int>(dims_.size()) - 1; }
  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  int rows(int layer) const { return dims_[static_cast<std::size_t>(layer) + 1]; }
  int cols(int layer) const { return dims_[static_cast<std::size_t>(layer)]; }

  std::size_t weight_offset(int layer) const { return offsets_[static_cast<std::size_t>(layer)]; }
  std::size_t bias_offset(int layer) const {
    return weight_offset(layer) + static_cast<std::size_t>(rows(layer) * cols(layer));
  }
  std::size_t parameter_count() const { return offsets_.empty() ? 0 : offsets_.back(); }

  bool operator==(const MlpLayout& other) const { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> offsets_;
};

class ParamStore {
 public:
  ParamStore() = default;
  // Zero-initialized parameters for the given layout.
  explicit ParamStore(MlpLayout layout);
  ParamStore(MlpLayout layout, std::vector<double> flat);

  const MlpLayout& layout() const { return layout_; }

  std::span<double> flat() { return flat_; }
  std::span<const double> flat() const { return flat_; }
  std::size_t size() const { return flat_.size(); }

  std::span<double> weights(int layer);
  std::span<const double> weights(int layer) const;
  std::span<double> bias(int layer);
  std::span<const double> bias(int layer) const;

  bool operator==(const ParamStore& other) const = default;

 private:
  MlpLayout layout_;
  std::vector<double> flat_;
};

}  // namespace pdpinn
