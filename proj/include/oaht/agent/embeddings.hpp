#pragma once

#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "oaht/graph/dynamic_graph.hpp"
#include "oaht/nn/gru.hpp"
#include "oaht/world/open_world.hpp"

namespace oaht::agent {

using nn::Vec;

// Type embedding per active agent (the recurrent hidden state).
using EmbeddingTable = std::map<AgentId, Vec>;

// Recurrent type-inference encoder: one gated-cell step per agent per
// timestep on <u_t, x_{t,j}>.
class TypeEncoder {
 public:
  struct Trace {
    Vec shared;
    std::vector<AgentId> ids;
    std::vector<nn::GruCell::Trace> cells;
    bool empty() const { return cells.empty(); }
  };

  TypeEncoder() = default;
  TypeEncoder(std::string name, std::size_t shared_dim, std::size_t own_dim, std::size_t embedding_dim);

  std::size_t embedding_dim() const { return cell_.hidden_dim(); }
  const nn::GruCell& cell() const { return cell_; }
  void init(nn::ParameterStore& store, std::mt19937_64& rng) const;

  // Keys of the result equal obs.ids. Agents missing from `prev` start from
  // the zero vector; agents absent from `obs` are dropped.
  EmbeddingTable advance(const nn::ParameterStore& store, const EmbeddingTable& prev, const world::ObsBatch& obs,
                         Trace* trace = nullptr) const;
  // Accumulates gradients for d loss / d embedding, one vector per trace id.
  void backward(nn::ParameterStore& store, const Trace& trace, std::span<const Vec> d_embeddings) const;

 private:
  nn::GruCell cell_;
};

// Removes `left`, zero-initializes `joined`, then advances every active agent
// one recurrent step. The membership after the deltas must equal obs.ids.
EmbeddingTable update_embeddings(const TypeEncoder& encoder, const nn::ParameterStore& store,
                                 const EmbeddingTable& table, const world::ObsBatch& obs,
                                 std::span<const AgentId> joined, std::span<const AgentId> left);

// Embeddings in graph node order.
std::vector<Vec> node_embeddings(const EmbeddingTable& table, const graph::DynamicAffinityGraph& g);

}  // namespace oaht::agent
