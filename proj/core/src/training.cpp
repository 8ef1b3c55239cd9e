#include "pdpinn/training.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace pdpinn {

namespace {

void require_region(const SampleBatch& batch, Region expected, const char* what) {
  if (batch.region != expected) {
    throw std::invalid_argument(std::string(what) + ": batch is from the wrong region");
  }
}

// Error_predict of iteration k uses its own evaluation points, drawn from
// (eval_seed, k) only, so it does not depend on record_every or on the
// training stream.
double evaluation_error(const Model& model, const TrainConfig& cfg, int iteration) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.eval_seed), static_cast<std::uint32_t>(cfg.eval_seed >> 32),
                    static_cast<std::uint32_t>(iteration)};
  Rng rng(seq);
  return predict_error(model, cfg.n_pred, rng);
}

}  // namespace

LossAndGrad empirical_pde_loss(const Model& model, const SampleBatch& batch,
                               const ExecutionPolicy& policy) {
  require_region(batch, Region::interior, "empirical_pde_loss");
  return batch_loss(model, batch, true, policy);
}

LossAndGrad empirical_bc_loss(const Model& model, const SampleBatch& batch,
                              const ExecutionPolicy& policy) {
  require_region(batch, Region::boundary, "empirical_bc_loss");
  return batch_loss(model, batch, true, policy);
}

double empirical_pde_loss(const Problem& problem, const Field& f, const SampleBatch& batch) {
  require_region(batch, Region::interior, "empirical_pde_loss");
  double sum = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto x = batch.point(i);
    const double r = problem.apply_operator(f(x), x) - problem.rhs(x);
    if (!std::isfinite(r)) throw std::runtime_error("non-finite PDE residual");
    sum += r * r;
  }
  return sum / static_cast<double>(batch.size());
}

double empirical_bc_loss(const Problem& problem, const Field& f, const SampleBatch& batch) {
  require_region(batch, Region::boundary, "empirical_bc_loss");
  double sum = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto x = batch.point(i);
    const double r = f(x).value - problem.boundary_value(x);
    if (!std::isfinite(r)) throw std::runtime_error("non-finite boundary residual");
    sum += r * r;
  }
  return sum / static_cast<double>(batch.size());
}

double predict_error(const Problem& problem, const Field& f, int n, Rng& rng) {
  const SampleBatch z = sample_interior(problem, n, rng);
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto x = z.point(i);
    const double e = f(x).value - problem.ground_truth(x);
    sum += e * e;
  }
  return sum / static_cast<double>(z.size());
}

double predict_error(const Model& model, int n, Rng& rng) {
  const Problem& problem = model.problem();
  const SampleBatch z = sample_interior(problem, n, rng);
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto x = z.point(i);
    const double e = model.evaluate(x).value - problem.ground_truth(x);
    sum += e * e;
  }
  return sum / static_cast<double>(z.size());
}

AdamState::AdamState(std::size_t size, AdamConfig config)
    : config_(config), m_(size, 0.0), v_(size, 0.0) {}

void AdamState::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("AdamState::step: length mismatch");
  }
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
    const double mhat = m_[i] / c1;
    const double vhat = v_[i] / c2;
    params[i] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
  }
}

TrainResult train(Model model, const TrainConfig& cfg, const RecordCallback& on_record) {
  if (cfg.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (cfg.n_pde < 1 || cfg.n_bc < 1 || cfg.n_pred < 1) {
    throw std::invalid_argument("n_pde, n_bc and n_pred must be >= 1");
  }
  if (cfg.record_every < 1) throw std::invalid_argument("record_every must be >= 1");

  const Problem& problem = model.problem();
  Rng rng(cfg.seed);
  AdamState adam(model.params().size(), cfg.adam);
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  TrainResult result{model, {}};
  auto emit = [&](const TrainRecord& rec) {
    result.records.push_back(rec);
    if (on_record) on_record(rec);
  };

  SampleBatch interior;
  SampleBatch boundary;
  if (cfg.fixed_collocation) {
    interior = sample_interior(problem, cfg.n_pde, rng);
    boundary = sample_boundary(problem, cfg.n_bc, rng);
  }

  {
    // iteration 0: the initial model
    const SampleBatch xi = cfg.fixed_collocation ? interior : sample_interior(problem, cfg.n_pde, rng);
    const SampleBatch yi = cfg.fixed_collocation ? boundary : sample_boundary(problem, cfg.n_bc, rng);
    TrainRecord rec;
    rec.loss_pde = batch_loss(model, xi, false, cfg.exec).loss;
    rec.loss_bc = batch_loss(model, yi, false, cfg.exec).loss;
    rec.error_predict = evaluation_error(model, cfg, 0);
    rec.elapsed = elapsed();
    emit(rec);
  }

  std::vector<double> grad(model.params().size());
  for (int it = 1; it <= cfg.iterations; ++it) {
    if (!cfg.fixed_collocation) {
      interior = sample_interior(problem, cfg.n_pde, rng);
      boundary = sample_boundary(problem, cfg.n_bc, rng);
    }
    const LossAndGrad pde = empirical_pde_loss(model, interior, cfg.exec);
    const LossAndGrad bc = empirical_bc_loss(model, boundary, cfg.exec);
    const double total = pde.loss + bc.loss;
    if (!std::isfinite(total) || total > cfg.divergence_threshold) {
      TrainRecord rec{it, pde.loss, bc.loss, std::nan(""), elapsed()};
      std::ostringstream os;
      os << "training diverged at iteration " << it << ": loss_pde=" << pde.loss
         << " loss_bc=" << bc.loss;
      throw DivergenceError(os.str(), rec);
    }
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = pde.grad[i] + bc.grad[i];
    adam.step(model.params().flat(), grad);

    if (it % cfg.record_every == 0 || it == cfg.iterations) {
      TrainRecord rec;
      rec.iteration = it;
      rec.loss_pde = pde.loss;
      rec.loss_bc = bc.loss;
      rec.error_predict = evaluation_error(model, cfg, it);
      rec.elapsed = elapsed();
      emit(rec);
    }
  }
  result.model = std::move(model);
  return result;
}

}  // namespace pdpinn
