#include "pdpinn/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace pdpinn {

namespace {

struct ChunkResult {
  double sum_sq = 0.0;
  GradVector grad;
  std::vector<double> residuals;
};

struct Chunk {
  std::size_t begin;
  std::size_t end;
};

std::string describe_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

ChunkResult run_chunk(const Model& model, const SampleBatch& batch, Chunk chunk, double scale,
                      bool with_gradient) {
  const Problem& problem = model.problem();
  const int m = problem.dim();
  const auto n = static_cast<Eigen::Index>(chunk.end - chunk.begin);
  const int words = model.dictionary().word_count();
  const bool plain = model.dictionary().kind == DictionaryKind::none;
  const bool interior = batch.region == Region::interior;

  JetBatch input(model.network_input_dim(), n, m);
  JetBatch dict;
  if (!plain) dict = JetBatch(words, n, m);
  std::vector<OperatorCoeffs> ops(interior ? static_cast<std::size_t>(n) : 0);
  std::vector<double> target(static_cast<std::size_t>(n));

  for (Eigen::Index s = 0; s < n; ++s) {
    const auto x = batch.point(chunk.begin + static_cast<std::size_t>(s));
    const auto inputs = model.network_inputs(x);
    for (std::size_t f = 0; f < inputs.size(); ++f) {
      input.set_jet(static_cast<Eigen::Index>(f), s, inputs[f]);
    }
    if (!plain) {
      const auto coords = problem.coordinate_jets(x);
      const auto w = eval_dictionary(model.dictionary(), coords);
      for (std::size_t k = 0; k < w.size(); ++k) dict.set_jet(static_cast<Eigen::Index>(k), s, w[k]);
    }
    const auto si = static_cast<std::size_t>(s);
    if (interior) {
      ops[si] = problem.operator_at(x);
      target[si] = problem.rhs(x);
    } else {
      target[si] = problem.boundary_value(x);
    }
  }

  MlpBatchPass pass(model.params(), std::move(input));
  const JetBatch& net = pass.output();

  // Fused predictor jets, one row.
  JetBatch fused(1, n, m);
  if (plain) {
    fused.data = net.data;
  } else {
    const auto d0 = dict.channel(0).array();
    const auto n0 = net.channel(0).array();
    fused.channel(0) = (d0 * n0).colwise().sum().matrix();
    for (int k = 0; k < m; ++k) {
      const auto d1 = dict.channel(dict.d1_channel(k)).array();
      const auto d2 = dict.channel(dict.d2_channel(k)).array();
      const auto n1 = net.channel(net.d1_channel(k)).array();
      const auto n2 = net.channel(net.d2_channel(k)).array();
      fused.channel(fused.d1_channel(k)) = (d1 * n0 + d0 * n1).colwise().sum().matrix();
      fused.channel(fused.d2_channel(k)) =
          ((d2 * n0 + d0 * n2) + 2.0 * (d1 * n1)).colwise().sum().matrix();
    }
  }

  ChunkResult result;
  result.residuals.resize(static_cast<std::size_t>(n));
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto si = static_cast<std::size_t>(s);
    double r;
    if (interior) {
      const OperatorCoeffs& c = ops[si];
      double acc = 0.0;
      for (int k = 0; k < m; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        acc += c.second[kk] * fused.data(0, fused.d2_channel(k) * n + s) +
               c.first[kk] * fused.data(0, fused.d1_channel(k) * n + s);
      }
      acc += c.zeroth * fused.data(0, s);
      r = acc - target[si];
    } else {
      r = fused.data(0, s) - target[si];
    }
    if (!std::isfinite(r)) {
      const auto x = batch.point(chunk.begin + si);
      throw NonFiniteResidual("non-finite residual at point " + describe_point(x),
                              std::vector<double>(x.begin(), x.end()));
    }
    result.residuals[si] = r;
    result.sum_sq += r * r;
  }

  if (!with_gradient) return result;

  // d(loss)/d(fused jets)
  JetBatch dfused(1, n, m);
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto si = static_cast<std::size_t>(s);
    const double g = scale * result.residuals[si];
    if (interior) {
      const OperatorCoeffs& c = ops[si];
      dfused.data(0, s) = g * c.zeroth;
      for (int k = 0; k < m; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        dfused.data(0, dfused.d1_channel(k) * n + s) = g * c.first[kk];
        dfused.data(0, dfused.d2_channel(k) * n + s) = g * c.second[kk];
      }
    } else {
      dfused.data(0, s) = g;
    }
  }

  JetBatch dnet(words, n, m);
  if (plain) {
    dnet.data = dfused.data;
  } else {
    const Eigen::Array<double, 1, Eigen::Dynamic> g0 = dfused.channel(0).array();
    const auto d0 = dict.channel(0).array();
    Eigen::ArrayXXd dn0 = d0.rowwise() * g0;
    for (int k = 0; k < m; ++k) {
      const Eigen::Array<double, 1, Eigen::Dynamic> g1 = dfused.channel(dfused.d1_channel(k)).array();
      const Eigen::Array<double, 1, Eigen::Dynamic> g2 = dfused.channel(dfused.d2_channel(k)).array();
      const auto d1 = dict.channel(dict.d1_channel(k)).array();
      const auto d2 = dict.channel(dict.d2_channel(k)).array();
      dn0 += d1.rowwise() * g1 + d2.rowwise() * g2;
      dnet.channel(dnet.d1_channel(k)) = (d0.rowwise() * g1 + 2.0 * (d1.rowwise() * g2)).matrix();
      dnet.channel(dnet.d2_channel(k)) = (d0.rowwise() * g2).matrix();
    }
    dnet.channel(0) = dn0.matrix();
  }

  result.grad.assign(model.params().size(), 0.0);
  pass.backward(dnet, result.grad);
  return result;
}

std::vector<ChunkResult> run_chunks(const Model& model, const SampleBatch& batch,
                                    bool with_gradient, const ExecutionPolicy& policy) {
  const std::size_t total = batch.size();
  if (total == 0) throw std::invalid_argument("empty sample batch");
  if (batch.dim != model.problem().dim()) {
    throw std::invalid_argument("sample batch dimension does not match the problem");
  }
  const int threads = std::max(1, policy.threads);
  std::size_t chunk_size = std::max<std::size_t>(1, policy.chunk);
  if (!policy.deterministic) {
    chunk_size = (total + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
  }
  std::vector<Chunk> chunks;
  for (std::size_t b = 0; b < total; b += chunk_size) chunks.push_back({b, std::min(total, b + chunk_size)});

  const double scale = 2.0 / static_cast<double>(total);
  std::vector<ChunkResult> results(chunks.size());
  if (threads == 1 || chunks.size() == 1) {
    for (std::size_t c = 0; c < chunks.size(); ++c) {
      results[c] = run_chunk(model, batch, chunks[c], scale, with_gradient);
    }
    return results;
  }

  std::vector<std::exception_ptr> errors(chunks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks.size(); c = next++) {
      try {
        results[c] = run_chunk(model, batch, chunks[c], scale, with_gradient);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), chunks.size());
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace

LossAndGrad batch_loss(const Model& model, const SampleBatch& batch, bool with_gradient,
                       const ExecutionPolicy& policy) {
  const auto results = run_chunks(model, batch, with_gradient, policy);
  LossAndGrad out;
  double sum = 0.0;
  for (const ChunkResult& r : results) sum += r.sum_sq;
  out.loss = sum / static_cast<double>(batch.size());
  if (with_gradient) {
    out.grad.assign(model.params().size(), 0.0);
    for (const ChunkResult& r : results) {
      for (std::size_t i = 0; i < out.grad.size(); ++i) out.grad[i] += r.grad[i];
    }
  }
  return out;
}

std::vector<double> batch_residuals(const Model& model, const SampleBatch& batch,
                                    const ExecutionPolicy& policy) {
  const auto results = run_chunks(model, batch, false, policy);
  std::vector<double> out;
  out.reserve(batch.size());
  for (const ChunkResult& r : results) out.insert(out.end(), r.residuals.begin(), r.residuals.end());
  return out;
}

}  // namespace pdpinn
