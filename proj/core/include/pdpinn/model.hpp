#pragma once

// The predictor F(x) = <D(x), N(lift(x))> for one problem.

#include <cstdint>
#include <span>
#include <vector>

#include "pdpinn/dictionary.hpp"
#include "pdpinn/network.hpp"
#include "pdpinn/problems.hpp"

namespace pdpinn {

class Model {
 public:
  Model(Problem problem, DictionarySpec dictionary, bool lift, ParamStore params);

  // Fresh network with the default initialization.
  static Model initialize(Problem problem, DictionarySpec dictionary, bool lift,
                          std::vector<int> hidden_widths, std::uint64_t seed);

  const Problem& problem() const { return problem_; }
  const DictionarySpec& dictionary() const { return dictionary_; }
  bool lift() const { return lift_; }
  const ParamStore& params() const { return params_; }
  ParamStore& params() { return params_; }

  // Network input width: 3 for the lifted sphere, else the problem dimension.
  int network_input_dim() const;
  static int network_input_dim(const Problem& problem, bool lift);

  // Jets of the network inputs at a problem point.
  std::vector<Jet2> network_inputs(std::span<const double> x) const;

  Jet2 evaluate(std::span<const double> x) const;

  // Same predictor with the parameters supplied separately, e.g. as tape
  // variables.
  template <typename T>
  BasicJet<T> evaluate(std::span<const double> x, std::span<const T> flat) const {
    const auto inputs = network_inputs(x);
    std::vector<BasicJet<T>> promoted;
    promoted.reserve(inputs.size());
    for (const Jet2& j : inputs) promoted.push_back(promote<T>(j));
    auto net = mlp_forward<T>(params_.layout(), flat, std::span<const BasicJet<T>>(promoted));
    if (dictionary_.kind == DictionaryKind::none) return net[0];
    const auto coords = problem_.coordinate_jets(x);
    const auto words = eval_dictionary(dictionary_, coords);
    return fuse<T>(words, std::span<const BasicJet<T>>(net));
  }

  Field field() const;

 private:
  Problem problem_;
  DictionarySpec dictionary_;
  bool lift_;
  ParamStore params_;
};

}  // namespace pdpinn
