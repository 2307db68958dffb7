#include "oaht/nn/optimizer.hpp"

#include <cmath>

#include "oaht/errors.hpp"

namespace oaht::nn {

Optimizer::Optimizer(OptimizerKind kind, double beta1, double beta2, double eps)
    : kind_(kind), beta1_(beta1), beta2_(beta2), eps_(eps) {
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && eps > 0.0)) {
    throw DomainError("invalid optimizer hyperparameters");
  }
}

void Optimizer::step(ParameterStore& store, double lr) {
  if (!std::isfinite(lr) || lr < 0.0) throw DomainError("learning rate must be finite and non-negative");
  if (!store.grads_finite()) throw NumericError("non-finite gradient in optimizer step");
  ++steps_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
  for (const auto& name : store.names()) {
    auto w = store.values(name);
    auto g = store.grads(name);
    if (kind_ == OptimizerKind::Sgd) {
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * g[i];
      continue;
    }
    auto& m = m_[name];
    auto& v = v_[name];
    if (m.size() != w.size()) {
      m.assign(w.size(), 0.0);
      v.assign(w.size(), 0.0);
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      w[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
    }
  }
  store.zero_grad();
}

}  // namespace oaht::nn
