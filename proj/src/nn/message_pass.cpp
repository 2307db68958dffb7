#include "oaht/nn/message_pass.hpp"

#include "oaht/errors.hpp"

namespace oaht::nn {

MessagePass::MessagePass(std::string name, std::size_t node_dim, std::size_t message_dim, std::size_t out_dim,
                         std::size_t hidden_dim, Activation activation)
    : node_dim_(node_dim),
      message_dim_(message_dim),
      f_(name + ".f", NetSpec{{2 * node_dim, hidden_dim, message_dim}, activation, OutputTransform::None}),
      g_(name + ".g", NetSpec{{node_dim + message_dim, hidden_dim, out_dim}, activation, OutputTransform::None}) {}

void MessagePass::init(ParameterStore& store, std::mt19937_64& rng) const {
  f_.init(store, rng);
  g_.init(store, rng);
}

std::vector<Vec> MessagePass::forward(const ParameterStore& store, std::span<const Vec> nodes,
                                      std::span<const std::pair<int, int>> edges, Trace* trace) const {
  const int n = static_cast<int>(nodes.size());
  for (const auto& node : nodes) {
    if (node.size() != node_dim_) throw DomainError("message pass: node feature width mismatch");
  }
  std::vector<Vec> agg(nodes.size(), Vec(message_dim_, 0.0));
  if (trace) {
    trace->edges.assign(edges.begin(), edges.end());
    trace->f.assign(edges.size(), {});
    trace->g.assign(nodes.size(), {});
  }
  Vec pair(2 * node_dim_);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [k, j] = edges[e];
    if (k < 0 || k >= n || j < 0 || j >= n) throw DomainError("message pass: edge references an invalid node");
    std::copy(nodes[k].begin(), nodes[k].end(), pair.begin());
    std::copy(nodes[j].begin(), nodes[j].end(), pair.begin() + static_cast<std::ptrdiff_t>(node_dim_));
    const Vec m = f_.forward(store, pair, trace ? &trace->f[e] : nullptr);
    for (std::size_t i = 0; i < message_dim_; ++i) agg[j][i] += m[i];
  }
  std::vector<Vec> out(nodes.size());
  Vec input(node_dim_ + message_dim_);
  for (int j = 0; j < n; ++j) {
    std::copy(nodes[j].begin(), nodes[j].end(), input.begin());
    std::copy(agg[j].begin(), agg[j].end(), input.begin() + static_cast<std::ptrdiff_t>(node_dim_));
    out[j] = g_.forward(store, input, trace ? &trace->g[j] : nullptr);
  }
  return out;
}

std::vector<Vec> MessagePass::backward(ParameterStore& store, const Trace& trace, std::span<const Vec> d_out) const {
  if (trace.empty()) throw StateError("message pass: backward called without a cached forward pass");
  if (d_out.size() != trace.g.size()) throw DomainError("message pass: upstream gradient count mismatch");
  const std::size_t n = trace.g.size();
  std::vector<Vec> d_nodes(n, Vec(node_dim_, 0.0));
  std::vector<Vec> d_agg(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec d_in = g_.backward(store, trace.g[j], d_out[j]);
    for (std::size_t i = 0; i < node_dim_; ++i) d_nodes[j][i] += d_in[i];
    d_agg[j].assign(d_in.begin() + static_cast<std::ptrdiff_t>(node_dim_), d_in.end());
  }
  for (std::size_t e = 0; e < trace.edges.size(); ++e) {
    const auto [k, j] = trace.edges[e];
    const Vec d_pair = f_.backward(store, trace.f[e], d_agg[j]);
    for (std::size_t i = 0; i < node_dim_; ++i) {
      d_nodes[k][i] += d_pair[i];
      d_nodes[j][i] += d_pair[node_dim_ + i];
    }
  }
  return d_nodes;
}

}  // namespace oaht::nn
