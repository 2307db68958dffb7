#include "oaht/agent/embeddings.hpp"

#include <algorithm>

#include "oaht/errors.hpp"

namespace oaht::agent {

TypeEncoder::TypeEncoder(std::string name, std::size_t shared_dim, std::size_t own_dim, std::size_t embedding_dim)
    : cell_(std::move(name), shared_dim, own_dim, embedding_dim) {}

void TypeEncoder::init(nn::ParameterStore& store, std::mt19937_64& rng) const { cell_.init(store, rng); }

EmbeddingTable TypeEncoder::advance(const nn::ParameterStore& store, const EmbeddingTable& prev,
                                    const world::ObsBatch& obs, Trace* trace) const {
  if (obs.ids.size() != obs.own.size()) throw DomainError("observation batch is inconsistent");
  const Vec proj = cell_.project_shared(store, obs.shared);
  const Vec zero(embedding_dim(), 0.0);
  EmbeddingTable out;
  if (trace) {
    trace->shared = obs.shared;
    trace->ids = obs.ids;
    trace->cells.assign(obs.ids.size(), {});
  }
  for (std::size_t i = 0; i < obs.ids.size(); ++i) {
    auto it = prev.find(obs.ids[i]);
    const Vec& h = it == prev.end() ? zero : it->second;
    out[obs.ids[i]] = cell_.step(store, proj, obs.own[i], h, trace ? &trace->cells[i] : nullptr);
  }
  return out;
}

void TypeEncoder::backward(nn::ParameterStore& store, const Trace& trace, std::span<const Vec> d_embeddings) const {
  if (trace.empty()) throw StateError("type encoder: backward called without a cached forward pass");
  if (d_embeddings.size() != trace.cells.size()) throw DomainError("type encoder: gradient count mismatch");
  Vec d_proj(3 * embedding_dim(), 0.0);
  for (std::size_t i = 0; i < trace.cells.size(); ++i) {
    const auto g = cell_.backward(store, trace.cells[i], d_embeddings[i]);
    for (std::size_t k = 0; k < d_proj.size(); ++k) d_proj[k] += g.d_shared_proj[k];
  }
  cell_.backward_shared(store, d_proj, trace.shared);
}

EmbeddingTable update_embeddings(const TypeEncoder& encoder, const nn::ParameterStore& store,
                                 const EmbeddingTable& table, const world::ObsBatch& obs,
                                 std::span<const AgentId> joined, std::span<const AgentId> left) {
  EmbeddingTable next = table;
  for (AgentId id : left) next.erase(id);
  for (AgentId id : joined) next[id] = Vec(encoder.embedding_dim(), 0.0);
  if (next.size() != obs.ids.size()) throw DomainError("observation batch does not cover the active agents");
  for (AgentId id : obs.ids) {
    if (!next.count(id)) throw DomainError("missing embedding for agent " + std::to_string(id));
  }
  return encoder.advance(store, next, obs);
}

std::vector<Vec> node_embeddings(const EmbeddingTable& table, const graph::DynamicAffinityGraph& g) {
  std::vector<Vec> out;
  out.reserve(g.size());
  for (AgentId id : g.nodes()) {
    auto it = table.find(id);
    if (it == table.end()) throw DomainError("no embedding for graph node " + std::to_string(id));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace oaht::agent
