#include "pdpinn/params.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace pdpinn {

MlpLayout::MlpLayout(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) {
    throw std::invalid_argument("MLP layout needs at least an input and an output dimension");
  }
  for (int d : dims_) {
    if (d < 1) {
      throw std::invalid_argument("MLP layer dimension must be >= 1, got " + std::to_string(d));
    }
  }
  offsets_.reserve(dims_.size());
  std::size_t off = 0;
  for (int layer = 0; layer < layer_count(); ++layer) {
    offsets_.push_back(off);
    off += static_cast<std::size_t>(rows(layer)) * static_cast<std::size_t>(cols(layer) + 1);
  }
  offsets_.push_back(off);
}

ParamStore::ParamStore(MlpLayout layout)
    : layout_(std::move(layout)), flat_(layout_.parameter_count(), 0.0) {}

ParamStore::ParamStore(MlpLayout layout, std::vector<double> flat)
    : layout_(std::move(layout)), flat_(std::move(flat)) {
  if (flat_.size() != layout_.parameter_count()) {
    throw std::invalid_argument("parameter vector length " + std::to_string(flat_.size()) +
                                " does not match layout (" +
                                std::to_string(layout_.parameter_count()) + ")");
  }
}

std::span<double> ParamStore::weights(int layer) {
  return std::span<double>(flat_).subspan(
      layout_.weight_offset(layer),
      static_cast<std::size_t>(layout_.rows(layer) * layout_.cols(layer)));
}

std::span<const double> ParamStore::weights(int layer) const {
  return std::span<const double>(flat_).subspan(
      layout_.weight_offset(layer),
      static_cast<std::size_t>(layout_.rows(layer) * layout_.cols(layer)));
}

std::span<double> ParamStore::bias(int layer) {
  return std::span<double>(flat_).subspan(layout_.bias_offset(layer),
                                          static_cast<std::size_t>(layout_.rows(layer)));
}

std::span<const double> ParamStore::bias(int layer) const {
  return std::span<const double>(flat_).subspan(layout_.bias_offset(layer),
                                                static_cast<std::size_t>(layout_.rows(layer)));
}

}  // namespace pdpinn
