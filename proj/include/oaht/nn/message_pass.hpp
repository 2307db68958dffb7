#pragma once

#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oaht/nn/mlp.hpp"

namespace oaht::nn {

// One round of edge-to-node aggregation with a sum aggregator:
//   out_j = g(x_j ++ sum_{(k, j) in E} f(x_k ++ x_j))
// Edges are (sender, receiver) node indices.
class MessagePass {
 public:
  struct Trace {
    std::vector<std::pair<int, int>> edges;
    std::vector<Mlp::Trace> f;
    std::vector<Mlp::Trace> g;
    bool empty() const { return g.empty(); }
  };

  MessagePass() = default;
  MessagePass(std::string name, std::size_t node_dim, std::size_t message_dim, std::size_t out_dim,
              std::size_t hidden_dim, Activation activation = Activation::ReLU);

  std::size_t node_dim() const { return node_dim_; }
  std::size_t message_dim() const { return message_dim_; }
  std::size_t out_dim() const { return g_.output_dim(); }
  const Mlp& edge_net() const { return f_; }
  const Mlp& node_net() const { return g_; }

  void init(ParameterStore& store, std::mt19937_64& rng) const;

  std::vector<Vec> forward(const ParameterStore& store, std::span<const Vec> nodes,
                           std::span<const std::pair<int, int>> edges, Trace* trace = nullptr) const;
  // Accumulates parameter gradients; returns the gradient w.r.t. each node input.
  std::vector<Vec> backward(ParameterStore& store, const Trace& trace, std::span<const Vec> d_out) const;

 private:
  std::size_t node_dim_ = 0;
  std::size_t message_dim_ = 0;
  Mlp f_;
  Mlp g_;
};

}  // namespace oaht::nn
