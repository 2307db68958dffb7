#include "oaht/nn/mlp.hpp"

#include <cmath>

#include "oaht/errors.hpp"
#include "oaht/nn/linalg.hpp"

namespace oaht::nn {

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

double activate(Activation a, double x) {
  switch (a) {
    case Activation::ReLU:
      return x > 0.0 ? x : 0.0;
    case Activation::Tanh:
      return std::tanh(x);
    case Activation::Identity:
      return x;
    case Activation::Softplus:
      return softplus(x);
  }
  return x;
}

double activate_grad(Activation a, double pre) {
  switch (a) {
    case Activation::ReLU:
      return pre > 0.0 ? 1.0 : 0.0;
    case Activation::Tanh: {
      const double t = std::tanh(pre);
      return 1.0 - t * t;
    }
    case Activation::Identity:
      return 1.0;
    case Activation::Softplus:
      return sigmoid(pre);
  }
  return 1.0;
}

double transform(OutputTransform t, double x) {
  switch (t) {
    case OutputTransform::None:
      return x;
    case OutputTransform::NonNegative:
      return softplus(x);
    case OutputTransform::NonPositive:
      return -softplus(x);
    case OutputTransform::Zero:
      return 0.0;
  }
  return x;
}

double transform_grad(OutputTransform t, double pre) {
  switch (t) {
    case OutputTransform::None:
      return 1.0;
    case OutputTransform::NonNegative:
      return sigmoid(pre);
    case OutputTransform::NonPositive:
      return -sigmoid(pre);
    case OutputTransform::Zero:
      return 0.0;
  }
  return 1.0;
}

}  // namespace

void glorot_uniform(std::span<double> values, std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-a, a);
  for (double& v : values) v = dist(rng);
}

Mlp::Mlp(std::string name, NetSpec spec) : name_(std::move(name)), spec_(std::move(spec)) {
  if (spec_.widths.size() < 2) throw DomainError("an MLP needs at least an input and an output width");
  for (auto w : spec_.widths) {
    if (w < 1) throw DomainError("MLP widths must be >= 1");
  }
}

std::string Mlp::weight_name(std::size_t layer) const { return name_ + ".W" + std::to_string(layer); }
std::string Mlp::bias_name(std::size_t layer) const { return name_ + ".b" + std::to_string(layer); }

void Mlp::init(ParameterStore& store, std::mt19937_64& rng) const {
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const auto in = spec_.widths[l];
    const auto out = spec_.widths[l + 1];
    store.add(weight_name(l), {out, in});
    store.add(bias_name(l), {out});
    glorot_uniform(store.values(weight_name(l)), in, out, rng);
  }
}

Vec Mlp::forward(const ParameterStore& store, std::span<const double> x, Trace* trace) const {
  if (x.size() != input_dim()) throw DomainError("MLP " + name_ + ": input width mismatch");
  if (trace) {
    trace->inputs.clear();
    trace->pre.clear();
  }
  Vec h(x.begin(), x.end());
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const auto in = spec_.widths[l];
    const auto out = spec_.widths[l + 1];
    Vec pre(out);
    linalg::vec(std::span<double>(pre)) =
        linalg::mat(store.values(weight_name(l)), out, in) * linalg::vec(std::span<const double>(h)) +
        linalg::vec(store.values(bias_name(l)));
    const bool last = l + 1 == num_layers();
    Vec next(out);
    for (std::size_t i = 0; i < out; ++i) {
      next[i] = last ? transform(spec_.output, pre[i]) : activate(spec_.activation, pre[i]);
    }
    if (trace) {
      trace->inputs.push_back(std::move(h));
      trace->pre.push_back(std::move(pre));
    }
    h = std::move(next);
  }
  return h;
}

Vec Mlp::backward(ParameterStore& store, const Trace& trace, std::span<const double> dout) const {
  if (trace.empty()) throw StateError("MLP " + name_ + ": backward called without a cached forward pass");
  if (dout.size() != output_dim()) throw DomainError("MLP " + name_ + ": upstream gradient width mismatch");
  Vec delta(dout.size());
  const Vec& last_pre = trace.pre.back();
  for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = dout[i] * transform_grad(spec_.output, last_pre[i]);

  for (std::size_t l = num_layers(); l-- > 0;) {
    const auto in = spec_.widths[l];
    const auto out = spec_.widths[l + 1];
    const auto d = linalg::vec(std::span<const double>(delta));
    const auto input = linalg::vec(std::span<const double>(trace.inputs[l]));
    linalg::mat(store.grads(weight_name(l)), out, in).noalias() += d * input.transpose();
    linalg::vec(store.grads(bias_name(l))) += d;
    Vec dinput(in);
    linalg::vec(std::span<double>(dinput)).noalias() =
        linalg::mat(store.values(weight_name(l)), out, in).transpose() * d;
    if (l > 0) {
      const Vec& pre = trace.pre[l - 1];
      for (std::size_t i = 0; i < in; ++i) dinput[i] *= activate_grad(spec_.activation, pre[i]);
    }
    delta = std::move(dinput);
  }
  return delta;
}

}  // namespace oaht::nn
