#include "pdpinn/network.hpp"

#include <cmath>
#include <random>
#include <string>

namespace pdpinn {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

MlpLayout MlpConfig::layout() const {
  if (hidden_widths.empty()) {
    throw std::invalid_argument("MLP needs at least one hidden layer");
  }
  std::vector<int> dims;
  dims.reserve(hidden_widths.size() + 2);
  dims.push_back(input_dim);
  dims.insert(dims.end(), hidden_widths.begin(), hidden_widths.end());
  dims.push_back(output_dim);
  return MlpLayout(std::move(dims));
}

ParamStore init_mlp(const MlpConfig& cfg) {
  ParamStore params(cfg.layout());
  std::mt19937_64 rng(cfg.seed);
  const MlpLayout& layout = params.layout();
  for (int layer = 0; layer < layout.layer_count(); ++layer) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layout.cols(layer)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : params.weights(layer)) w = dist(rng);
    for (double& b : params.bias(layer)) b = dist(rng);
  }
  return params;
}

std::vector<Jet2> mlp_forward(const ParamStore& params, std::span<const Jet2> x) {
  return mlp_forward<double>(params.layout(), params.flat(), x);
}

JetBatch::JetBatch(Eigen::Index features, Eigen::Index samples_, int deriv_dim_)
    : deriv_dim(deriv_dim_), samples(samples_),
      data(Eigen::MatrixXd::Zero(features, (1 + 2 * deriv_dim_) * samples_)) {
  if (deriv_dim_ < 0 || deriv_dim_ > kMaxJetDim) {
    throw std::invalid_argument("JetBatch derivative dimension out of range");
  }
}

Jet2 JetBatch::jet(Eigen::Index feature, Eigen::Index sample) const {
  Jet2 j = Jet2::constant(data(feature, sample), deriv_dim);
  for (int k = 0; k < deriv_dim; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    j.d1[kk] = data(feature, d1_channel(k) * samples + sample);
    j.d2[kk] = data(feature, d2_channel(k) * samples + sample);
  }
  return j;
}

void JetBatch::set_jet(Eigen::Index feature, Eigen::Index sample, const Jet2& j) {
  if (j.dim != deriv_dim) {
    throw std::invalid_argument("JetBatch::set_jet: jet dimension mismatch");
  }
  data(feature, sample) = j.value;
  for (int k = 0; k < deriv_dim; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    data(feature, d1_channel(k) * samples + sample) = j.d1[kk];
    data(feature, d2_channel(k) * samples + sample) = j.d2[kk];
  }
}

MlpBatchPass::MlpBatchPass(const ParamStore& params, JetBatch input) : params_(&params) {
  const MlpLayout& layout = params.layout();
  if (input.features() != layout.input_dim()) {
    throw std::invalid_argument("MlpBatchPass: input has " + std::to_string(input.features()) +
                                " features, network expects " +
                                std::to_string(layout.input_dim()));
  }
  const int m = input.deriv_dim;
  const Eigen::Index n = input.samples;
  activations_.reserve(static_cast<std::size_t>(layout.layer_count()) + 1);
  preactivations_.reserve(static_cast<std::size_t>(layout.layer_count()));
  activations_.push_back(std::move(input));

  for (int layer = 0; layer < layout.layer_count(); ++layer) {
    const int rows = layout.rows(layer);
    const int cols = layout.cols(layer);
    Eigen::Map<const RowMajorMatrix> w(params.weights(layer).data(), rows, cols);
    Eigen::Map<const Eigen::VectorXd> b(params.bias(layer).data(), rows);

    Eigen::MatrixXd z = w * activations_.back().data;
    z.leftCols(n).colwise() += b;

    JetBatch out;
    out.deriv_dim = m;
    out.samples = n;
    if (layer + 1 == layout.layer_count()) {
      out.data = std::move(z);
      activations_.push_back(std::move(out));
      break;
    }

    out.data.resize(rows, z.cols());
    out.channel(0) = z.leftCols(n).array().tanh().matrix();
    const Eigen::ArrayXXd t = out.channel(0).array();
    const Eigen::ArrayXXd s = 1.0 - t.square();
    for (int k = 0; k < m; ++k) {
      const auto z1 = z.middleCols(out.d1_channel(k) * n, n).array();
      const auto z2 = z.middleCols(out.d2_channel(k) * n, n).array();
      out.channel(out.d1_channel(k)) = (s * z1).matrix();
      out.channel(out.d2_channel(k)) = (s * z2 - 2.0 * t * s * z1.square()).matrix();
    }
    preactivations_.push_back(std::move(z));
    activations_.push_back(std::move(out));
  }
}

void MlpBatchPass::backward(const JetBatch& output_adjoint, std::span<double> grad) const {
  const ParamStore& params = *params_;
  const MlpLayout& layout = params.layout();
  const JetBatch& out = output();
  if (output_adjoint.data.rows() != out.data.rows() ||
      output_adjoint.data.cols() != out.data.cols()) {
    throw std::invalid_argument("MlpBatchPass::backward: adjoint shape mismatch");
  }
  if (grad.size() != params.size()) {
    throw std::invalid_argument("MlpBatchPass::backward: gradient length mismatch");
  }
  const int m = out.deriv_dim;
  const Eigen::Index n = out.samples;

  // Adjoint of the current layer's output, all channels.
  Eigen::MatrixXd g = output_adjoint.data;
  for (int layer = layout.layer_count() - 1; layer >= 0; --layer) {
    const int rows = layout.rows(layer);
    const int cols = layout.cols(layer);
    const bool hidden = layer + 1 < layout.layer_count();

    Eigen::MatrixXd gz;
    if (hidden) {
      const JetBatch& h = activations_[static_cast<std::size_t>(layer) + 1];
      const Eigen::MatrixXd& z = preactivations_[static_cast<std::size_t>(layer)];
      const Eigen::ArrayXXd t = h.channel(0).array();
      const Eigen::ArrayXXd s = 1.0 - t.square();
      const Eigen::ArrayXXd ds = -2.0 * t * s;               // d s / d z0
      const Eigen::ArrayXXd dts = s.square() - 2.0 * t.square() * s;  // d (t s) / d z0
      gz.resize(g.rows(), g.cols());
      Eigen::ArrayXXd gz0 = g.leftCols(n).array() * s;
      for (int k = 0; k < m; ++k) {
        const Eigen::Index c1 = h.d1_channel(k) * n;
        const Eigen::Index c2 = h.d2_channel(k) * n;
        const auto z1 = z.middleCols(c1, n).array();
        const auto z2 = z.middleCols(c2, n).array();
        const auto gh1 = g.middleCols(c1, n).array();
        const auto gh2 = g.middleCols(c2, n).array();
        gz.middleCols(c2, n) = (gh2 * s).matrix();
        gz.middleCols(c1, n) = (gh1 * s - 4.0 * gh2 * t * s * z1).matrix();
        gz0 += gh1 * z1 * ds + gh2 * (z2 * ds - 2.0 * z1.square() * dts);
      }
      gz.leftCols(n) = gz0.matrix();
    } else {
      gz = std::move(g);
    }

    const JetBatch& a = activations_[static_cast<std::size_t>(layer)];
    Eigen::Map<RowMajorMatrix> gw(grad.data() + layout.weight_offset(layer), rows, cols);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + layout.bias_offset(layer), rows);
    gw.noalias() += gz * a.data.transpose();
    gb += gz.leftCols(n).rowwise().sum();

    if (layer > 0) {
      Eigen::Map<const RowMajorMatrix> w(params.weights(layer).data(), rows, cols);
      g.noalias() = w.transpose() * gz;
    }
  }
}

}  // namespace pdpinn
