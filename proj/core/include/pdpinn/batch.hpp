#pragma once

// Batched residuals, mean-squared losses and their exact parameter
// gradients for a Model over a SampleBatch.
//
// Interior batches use the residual L[F](x) - q(x); boundary batches use
// F(x) - u~(x). Samples are processed in chunks; per-chunk partial sums are
// always reduced in chunk order.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdpinn/model.hpp"
#include "pdpinn/sampling.hpp"
#include "pdpinn/tape.hpp"

namespace pdpinn {

struct ExecutionPolicy {
  // Fixed chunking: the reduction order does not depend on `threads`, so
  // results are bit-reproducible on any machine. When false, the batch is
  // split into one chunk per thread.
  bool deterministic = true;
  int threads = 1;
  std::size_t chunk = 256;
};

struct LossAndGrad {
  double loss = 0.0;
  GradVector grad;  // empty when not requested
};

class NonFiniteResidual : public std::runtime_error {
 public:
  NonFiniteResidual(const std::string& what, std::vector<double> point)
      : std::runtime_error(what), point_(std::move(point)) {}
  const std::vector<double>& point() const { return point_; }

 private:
  std::vector<double> point_;
};

// Mean of squared residuals over the batch (and its gradient).
LossAndGrad batch_loss(const Model& model, const SampleBatch& batch, bool with_gradient,
                       const ExecutionPolicy& policy = {});

// Residual at every sample of the batch.
std::vector<double> batch_residuals(const Model& model, const SampleBatch& batch,
                                    const ExecutionPolicy& policy = {});

}  // namespace pdpinn
