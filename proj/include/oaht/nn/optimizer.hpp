#pragma once

#include <map>
#include <string>

#include "oaht/nn/parameter_store.hpp"

namespace oaht::nn {

enum class OptimizerKind { Sgd, AdamLike };

// First-order update rule. AdamLike keeps per-parameter first and second
// moment estimates with bias correction. A step consumes and clears the
// gradients; non-finite gradients abort the step before any value changes.
class Optimizer {
 public:
  explicit Optimizer(OptimizerKind kind, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  OptimizerKind kind() const { return kind_; }
  std::size_t steps() const { return steps_; }
  void step(ParameterStore& store, double lr);

 private:
  OptimizerKind kind_;
  double beta1_, beta2_, eps_;
  std::size_t steps_ = 0;
  std::map<std::string, Vec> m_, v_;
};

}  // namespace oaht::nn
