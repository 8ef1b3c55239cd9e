#include "pdpinn/model.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace pdpinn {

Model::Model(Problem problem, DictionarySpec dictionary, bool lift, ParamStore params)
    : problem_(std::move(problem)),
      dictionary_(dictionary),
      lift_(lift),
      params_(std::move(params)) {
  dictionary_.validate();
  if (lift_ && problem_.id() != ProblemId::sphere) {
    throw std::invalid_argument("the sphere lifting layer only applies to (theta, phi) inputs");
  }
  if (dictionary_.input_dim() > problem_.dim()) {
    throw std::invalid_argument("dictionary " + dictionary_.to_string() + " needs " +
                                std::to_string(dictionary_.input_dim()) +
                                " coordinates but " + problem_.name() + " has " +
                                std::to_string(problem_.dim()));
  }
  const MlpLayout& layout = params_.layout();
  if (layout.input_dim() != network_input_dim()) {
    throw std::invalid_argument("network input width " + std::to_string(layout.input_dim()) +
                                " does not match " + problem_.name() +
                                (lift_ ? " with lifting" : "") + " (expected " +
                                std::to_string(network_input_dim()) + ")");
  }
  if (layout.output_dim() != dictionary_.word_count()) {
    throw std::invalid_argument("network output width " + std::to_string(layout.output_dim()) +
                                " does not match dictionary " + dictionary_.to_string() + " (" +
                                std::to_string(dictionary_.word_count()) + " words)");
  }
}

Model Model::initialize(Problem problem, DictionarySpec dictionary, bool lift,
                        std::vector<int> hidden_widths, std::uint64_t seed) {
  MlpConfig cfg;
  cfg.input_dim = network_input_dim(problem, lift);
  cfg.hidden_widths = std::move(hidden_widths);
  cfg.output_dim = dictionary.word_count();
  cfg.seed = seed;
  return Model(std::move(problem), dictionary, lift, init_mlp(cfg));
}

int Model::network_input_dim(const Problem& problem, bool lift) {
  return lift ? 3 : problem.dim();
}

int Model::network_input_dim() const { return network_input_dim(problem_, lift_); }

std::vector<Jet2> Model::network_inputs(std::span<const double> x) const {
  auto coords = problem_.coordinate_jets(x);
  if (!lift_) return coords;
  const auto lifted = lift_sphere(coords[0], coords[1]);
  return {lifted.begin(), lifted.end()};
}

Jet2 Model::evaluate(std::span<const double> x) const {
  return evaluate<double>(x, params_.flat());
}

Field Model::field() const {
  return [m = *this](std::span<const double> x) { return m.evaluate(x); };
}

}  // namespace pdpinn
