#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pdpinn/batch.hpp"
#include "pdpinn/model.hpp"
#include "pdpinn/sampling.hpp"

namespace pdpinn {

// (1/N) sum |L[F](X_i) - q(X_i)|^2 over an interior batch, with gradient.
LossAndGrad empirical_pde_loss(const Model& model, const SampleBatch& batch,
                               const ExecutionPolicy& policy = {});
// (1/N) sum |F(Y_i) - u~(Y_i)|^2 over a boundary batch, with gradient.
LossAndGrad empirical_bc_loss(const Model& model, const SampleBatch& batch,
                              const ExecutionPolicy& policy = {});

// Value-only versions for an arbitrary predictor (e.g. the exact solution).
double empirical_pde_loss(const Problem& problem, const Field& f, const SampleBatch& batch);
double empirical_bc_loss(const Problem& problem, const Field& f, const SampleBatch& batch);

// Monte Carlo estimate of the mean squared error against the exact solution
// over n uniform interior points.
double predict_error(const Problem& problem, const Field& f, int n, Rng& rng);
double predict_error(const Model& model, int n, Rng& rng);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class AdamState {
 public:
  AdamState(std::size_t size, AdamConfig config = {});

  // One bias-corrected Adam update of `params` in place.
  void step(std::span<double> params, std::span<const double> grad);

  std::int64_t t() const { return t_; }
  const std::vector<double>& m() const { return m_; }
  const std::vector<double>& v() const { return v_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::int64_t t_ = 0;
};

struct TrainConfig {
  int iterations = 1000;
  int n_pde = 100;
  int n_bc = 2;
  int n_pred = 1000;
  int record_every = 10;
  std::uint64_t seed = 1;
  // Seed of the evaluation points of the prediction-error metric.
  std::uint64_t eval_seed = 0x5eed'e7a1ULL;
  bool fixed_collocation = false;
  double divergence_threshold = 1e12;
  AdamConfig adam;
  ExecutionPolicy exec;
};

struct TrainRecord {
  int iteration = 0;
  double loss_pde = 0.0;
  double loss_bc = 0.0;
  double error_predict = 0.0;
  double elapsed = 0.0;  // seconds since training started
};

struct TrainResult {
  Model model;
  std::vector<TrainRecord> records;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, TrainRecord last)
      : std::runtime_error(what), last_(last) {}
  const TrainRecord& last() const { return last_; }

 private:
  TrainRecord last_;
};

using RecordCallback = std::function<void(const TrainRecord&)>;

// Adam on loss_pde + loss_bc with fresh batches every iteration. Records are
// emitted for iteration 0 (the initial model), every record_every
// iterations and the final iteration. loss_pde/loss_bc of record k are the
// values on the batch of iteration k before its update; error_predict is
// measured after it.
TrainResult train(Model model, const TrainConfig& cfg, const RecordCallback& on_record = {});

}  // namespace pdpinn
