#include "oaht/value/value_model.hpp"

#include "oaht/errors.hpp"

namespace oaht::value {

ValueModel::ValueModel(ValueModelSpec spec)
    : spec_(spec),
      encoder_("value.enc", spec.shared_dim, spec.own_dim, spec.embedding_dim),
      heads_("value.heads",
             HeadsSpec{spec.embedding_dim, spec.hidden_dim, spec.num_actions, spec.rank, spec.pair_range,
                       spec.indiv_range}) {}

void ValueModel::init(nn::ParameterStore& store, std::mt19937_64& rng) const {
  encoder_.init(store, rng);
  heads_.init(store, rng);
}

Utilities ValueModel::forward(const nn::ParameterStore& store, const agent::EmbeddingTable& prev,
                              const world::ObsBatch& obs, const graph::DynamicAffinityGraph& g,
                              agent::EmbeddingTable* next, Trace* trace) const {
  if (obs.ids != g.nodes()) throw DomainError("observation order must match graph node order");
  agent::EmbeddingTable table = encoder_.advance(store, prev, obs, trace ? &trace->encoder : nullptr);
  const auto nodes = agent::node_embeddings(table, g);
  Utilities u = heads_.forward(store, nodes, trace ? &trace->heads : nullptr);
  if (next) *next = std::move(table);
  return u;
}

void ValueModel::backward(nn::ParameterStore& store, const Trace& trace, std::span<const Vec> d_indiv,
                          std::span<const Vec> d_factors) const {
  const auto d_nodes = heads_.backward(store, trace.heads, d_indiv, d_factors);
  encoder_.backward(store, trace.encoder, d_nodes);
}

}  // namespace oaht::value
