#pragma once

// tanh multilayer perceptron N: R^d -> R^N, evaluated on jets.
//
// Two evaluation paths share one parameter layout:
//  * mlp_forward: scalar jets, generic over the scalar type so it can run on
//    a reverse-mode tape;
//  * MlpBatchPass: a whole batch of jets as dense matrices, with an analytic
//    reverse pass through the jet propagation itself. This is what training
//    uses.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pdpinn/jet.hpp"
#include "pdpinn/params.hpp"

namespace pdpinn {

struct MlpConfig {
  int input_dim = 1;
  std::vector<int> hidden_widths;
  int output_dim = 1;
  std::uint64_t seed = 0;

  MlpLayout layout() const;
};

// Every weight and bias of layer i is drawn i.i.d. from
// U[-1/sqrt(d_{i-1}), 1/sqrt(d_{i-1})], where d_{i-1} is the layer's fan-in.
ParamStore init_mlp(const MlpConfig& cfg);

template <typename T>
std::vector<BasicJet<T>> mlp_forward(const MlpLayout& layout, std::span<const T> flat,
                                     std::span<const BasicJet<T>> x) {
  if (static_cast<int>(x.size()) != layout.input_dim()) {
    throw std::invalid_argument("mlp_forward: expected " + std::to_string(layout.input_dim()) +
                                " input jets, got " + std::to_string(x.size()));
  }
  if (flat.size() != layout.parameter_count()) {
    throw std::invalid_argument("mlp_forward: parameter count does not match layout");
  }
  std::vector<BasicJet<T>> current(x.begin(), x.end());
  for (int layer = 0; layer < layout.layer_count(); ++layer) {
    const int rows = layout.rows(layer);
    const int cols = layout.cols(layer);
    const auto w = flat.subspan(layout.weight_offset(layer),
                                static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    const auto b = flat.subspan(layout.bias_offset(layer), static_cast<std::size_t>(rows));
    const bool hidden = layer + 1 < layout.layer_count();
    std::vector<BasicJet<T>> next;
    next.reserve(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
      auto z = affine<T, T>(w.subspan(static_cast<std::size_t>(r * cols),
                                      static_cast<std::size_t>(cols)),
                            std::span<const BasicJet<T>>(current), b[static_cast<std::size_t>(r)]);
      next.push_back(hidden ? tanh(z) : z);
    }
    current = std::move(next);
  }
  return current;
}

std::vector<Jet2> mlp_forward(const ParamStore& params, std::span<const Jet2> x);

// A batch of jets stored feature-major: one row per feature and one column
// block per channel. Channel 0 holds values, channels 1..m the first
// derivatives and m+1..2m the second derivatives, each block `samples` wide.
struct JetBatch {
  int deriv_dim = 0;
  Eigen::Index samples = 0;
  Eigen::MatrixXd data;

  JetBatch() = default;
  JetBatch(Eigen::Index features, Eigen::Index samples, int deriv_dim);

  int channels() const { return 1 + 2 * deriv_dim; }
  Eigen::Index features() const { return data.rows(); }
  int d1_channel(int axis) const { return 1 + axis; }
  int d2_channel(int axis) const { return 1 + deriv_dim + axis; }

  auto channel(int c) { return data.middleCols(c * samples, samples); }
  auto channel(int c) const { return data.middleCols(c * samples, samples); }

  Jet2 jet(Eigen::Index feature, Eigen::Index sample) const;
  void set_jet(Eigen::Index feature, Eigen::Index sample, const Jet2& j);
};

class MlpBatchPass {
 public:
  MlpBatchPass(const ParamStore& params, JetBatch input);

  const JetBatch& output() const { return activations_.back(); }

  // Adds d(loss)/d(theta) to `grad`, given d(loss)/d(output jets) laid out
  // like output().
  void backward(const JetBatch& output_adjoint, std::span<double> grad) const;

 private:
  const ParamStore* params_;
  // activations_[0] is the input, activations_[i] the output of layer i.
  std::vector<JetBatch> activations_;
  // Affine outputs of the hidden layers, before tanh.
  std::vector<Eigen::MatrixXd> preactivations_;
};

}  // namespace pdpinn
