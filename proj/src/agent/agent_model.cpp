#include "oaht/agent/agent_model.hpp"

#include <algorithm>
#include <cmath>

#include "oaht/errors.hpp"

namespace oaht::agent {

namespace {

Vec softmax(const Vec& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  Vec p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

}  // namespace

AgentModel::AgentModel(AgentModelSpec spec)
    : spec_(spec),
      encoder_("agent.enc", spec.shared_dim, spec.own_dim, spec.embedding_dim),
      message_("agent.mp", spec.embedding_dim, spec.hidden_dim, spec.hidden_dim, spec.hidden_dim),
      head_("agent.head", nn::NetSpec{{spec.hidden_dim, spec.hidden_dim, static_cast<std::size_t>(spec.num_actions)},
                                      nn::Activation::ReLU, nn::OutputTransform::None}) {
  if (spec.num_actions < 1) throw DomainError("num_actions must be >= 1");
}

void AgentModel::init(nn::ParameterStore& store, std::mt19937_64& rng) const {
  encoder_.init(store, rng);
  message_.init(store, rng);
  head_.init(store, rng);
}

std::map<AgentId, Vec> AgentModel::policies_from_nodes(const nn::ParameterStore& store, const std::vector<Vec>& nodes,
                                                       const graph::DynamicAffinityGraph& g, Trace* trace) const {
  const auto& edges = g.edge_indices();
  const auto out = message_.forward(store, nodes, edges, trace ? &trace->message : nullptr);
  std::map<AgentId, Vec> policies;
  if (trace) {
    trace->teammate_nodes.clear();
    trace->heads.clear();
  }
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (g.nodes()[n] == g.learner()) continue;
    nn::Mlp::Trace* ht = nullptr;
    if (trace) {
      trace->teammate_nodes.push_back(static_cast<int>(n));
      ht = &trace->heads.emplace_back();
    }
    policies[g.nodes()[n]] = softmax(head_.forward(store, out[n], ht));
  }
  return policies;
}

std::map<AgentId, Vec> AgentModel::infer_teammate_policies(const nn::ParameterStore& store, const EmbeddingTable& table,
                                                           const graph::DynamicAffinityGraph& g) const {
  return policies_from_nodes(store, node_embeddings(table, g), g, nullptr);
}

std::map<AgentId, Vec> AgentModel::forward(const nn::ParameterStore& store, const EmbeddingTable& prev,
                                           const world::ObsBatch& obs, const graph::DynamicAffinityGraph& g,
                                           EmbeddingTable* next, Trace* trace) const {
  if (obs.ids != g.nodes()) throw DomainError("observation order must match graph node order");
  EmbeddingTable table = encoder_.advance(store, prev, obs, trace ? &trace->encoder : nullptr);
  auto policies = policies_from_nodes(store, node_embeddings(table, g), g, trace);
  if (next) *next = std::move(table);
  return policies;
}

void AgentModel::backward(nn::ParameterStore& store, const Trace& trace, std::span<const Vec> d_logits) const {
  if (d_logits.size() != trace.heads.size()) throw DomainError("agent model: gradient count mismatch");
  const std::size_t n = trace.message.g.size();
  std::vector<Vec> d_out(n, Vec(message_.out_dim(), 0.0));
  for (std::size_t i = 0; i < trace.heads.size(); ++i) {
    d_out[trace.teammate_nodes[i]] = head_.backward(store, trace.heads[i], d_logits[i]);
  }
  const auto d_nodes = message_.backward(store, trace.message, d_out);
  encoder_.backward(store, trace.encoder, d_nodes);
}

AgentLossResult agent_model_loss(const AgentModel& model, nn::ParameterStore& store,
                                 std::span<const AgentModelSample> episode, double weight_predict, bool accumulate) {
  AgentLossResult result;
  if (episode.empty()) return result;
  const double inv_t = 1.0 / static_cast<double>(episode.size());
  double nll = 0.0;
  for (const auto& sample : episode) {
    AgentModel::Trace trace;
    const auto policies = model.forward(store, sample.prev, sample.obs, sample.graph, nullptr,
                                        accumulate ? &trace : nullptr);
    std::vector<Vec> d_logits;
    for (const auto& [id, p] : policies) {
      auto it = sample.teammate_actions.find(id);
      if (it == sample.teammate_actions.end()) {
        throw DomainError("no recorded action for teammate " + std::to_string(id));
      }
      const int a = it->second;
      if (a < 0 || a >= static_cast<int>(p.size())) throw DomainError("recorded teammate action out of range");
      const bool clamped = p[a] < kLogClamp;
      result.clamp_warnings += clamped ? 1 : 0;
      nll -= std::log(std::max(p[a], kLogClamp));
      ++result.predictions;
      if (accumulate) {
        Vec d(p.size(), 0.0);
        if (!clamped) {
          for (std::size_t k = 0; k < p.size(); ++k) d[k] = weight_predict * inv_t * (p[k] - (static_cast<int>(k) == a));
        }
        d_logits.push_back(std::move(d));
      }
    }
    if (accumulate) model.backward(store, trace, d_logits);
  }
  result.loss = weight_predict * inv_t * nll;
  result.nll_per_prediction = result.predictions ? nll / static_cast<double>(result.predictions) : 0.0;
  return result;
}

}  // namespace oaht::agent
