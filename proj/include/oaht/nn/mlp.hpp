#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "oaht/nn/parameter_store.hpp"

namespace oaht::nn {

enum class Activation { ReLU, Tanh, Identity, Softplus };
enum class OutputTransform { None, NonNegative, NonPositive, Zero };

double softplus(double x);
double sigmoid(double x);

struct NetSpec {
  std::vector<std::size_t> widths;  // input width first, output width last
  Activation activation = Activation::ReLU;
  OutputTransform output = OutputTransform::None;
};

// Fills `values` with U(-a, a), a = sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(std::span<double> values, std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng);

// Feed-forward network whose parameters live in a ParameterStore under
// "<name>.W<l>" (row-major out x in) and "<name>.b<l>". The activation is
// applied after every layer except the last; the output transform is applied
// after the last.
class Mlp {
 public:
  struct Trace {
    std::vector<Vec> inputs;  // input of each layer
    std::vector<Vec> pre;     // pre-activation of each layer
    bool empty() const { return pre.empty(); }
  };

  Mlp() = default;
  Mlp(std::string name, NetSpec spec);

  const std::string& name() const { return name_; }
  const NetSpec& spec() const { return spec_; }
  std::size_t input_dim() const { return spec_.widths.front(); }
  std::size_t output_dim() const { return spec_.widths.back(); }
  std::size_t num_layers() const { return spec_.widths.size() - 1; }
  std::string weight_name(std::size_t layer) const;
  std::string bias_name(std::size_t layer) const;

  void init(ParameterStore& store, std::mt19937_64& rng) const;

  Vec forward(const ParameterStore& store, std::span<const double> x, Trace* trace = nullptr) const;
  // Accumulates parameter gradients into `store` and returns d loss / d input.
  Vec backward(ParameterStore& store, const Trace& trace, std::span<const double> dout) const;

 private:
  std::string name_;
  NetSpec spec_;
};

}  // namespace oaht::nn
