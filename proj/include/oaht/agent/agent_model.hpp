#pragma once

#include <map>
#include <random>
#include <span>
#include <vector>

#include "oaht/agent/embeddings.hpp"
#include "oaht/nn/message_pass.hpp"
#include "oaht/nn/mlp.hpp"

namespace oaht::agent {

struct AgentModelSpec {
  std::size_t shared_dim = 0;
  std::size_t own_dim = world::kOwnObsDim;
  std::size_t embedding_dim = 64;
  std::size_t hidden_dim = 64;  // message-pass and head hidden width
  int num_actions = 5;
};

// Teammate policy model q(a^{-i} | s): recurrent encoder, one message-passing
// round over the affinity graph, then a softmax policy head per teammate.
// Parameters live under the "agent." prefix.
class AgentModel {
 public:
  struct Trace {
    TypeEncoder::Trace encoder;
    nn::MessagePass::Trace message;
    std::vector<int> teammate_nodes;
    std::vector<nn::Mlp::Trace> heads;
  };

  explicit AgentModel(AgentModelSpec spec);

  const AgentModelSpec& spec() const { return spec_; }
  const TypeEncoder& encoder() const { return encoder_; }
  const nn::MessagePass& message_pass() const { return message_; }
  const nn::Mlp& head() const { return head_; }
  void init(nn::ParameterStore& store, std::mt19937_64& rng) const;

  // Distribution over actions for every teammate (every graph node but the learner).
  std::map<AgentId, Vec> infer_teammate_policies(const nn::ParameterStore& store, const EmbeddingTable& table,
                                                 const graph::DynamicAffinityGraph& g) const;

  // Advances the encoder one step from `prev` and infers teammate policies.
  // Requires obs.ids to list the graph nodes in node order.
  // The trace (if given) supports backward through the head, the message
  // pass, and the single encoder step.
  std::map<AgentId, Vec> forward(const nn::ParameterStore& store, const EmbeddingTable& prev,
                                 const world::ObsBatch& obs, const graph::DynamicAffinityGraph& g,
                                 EmbeddingTable* next = nullptr, Trace* trace = nullptr) const;
  // d loss / d logits per teammate, in trace.teammate_nodes order.
  void backward(nn::ParameterStore& store, const Trace& trace, std::span<const Vec> d_logits) const;

 private:
  std::map<AgentId, Vec> policies_from_nodes(const nn::ParameterStore& store, const std::vector<Vec>& nodes,
                                             const graph::DynamicAffinityGraph& g, Trace* trace) const;

  AgentModelSpec spec_;
  TypeEncoder encoder_;
  nn::MessagePass message_;
  nn::Mlp head_;
};

// One timestep of agent-model training data: the detached recurrent state
// before t, the observation batch at t, the graph at t, and the actions the
// teammates took at t.
struct AgentModelSample {
  EmbeddingTable prev;
  world::ObsBatch obs;
  graph::DynamicAffinityGraph graph;
  std::map<AgentId, int> teammate_actions;
};

struct AgentLossResult {
  double loss = 0.0;               // weight_predict * (1/T) * sum_t sum_j -log q(a_j)
  double nll_per_prediction = 0.0; // mean -log q over every (t, teammate)
  std::size_t predictions = 0;
  std::size_t clamp_warnings = 0;  // predictions whose probability fell below 1e-12
};

inline constexpr double kLogClamp = 1e-12;

// Accumulates gradients into `store` when `accumulate` is true.
AgentLossResult agent_model_loss(const AgentModel& model, nn::ParameterStore& store,
                                 std::span<const AgentModelSample> episode, double weight_predict, bool accumulate);

}  // namespace oaht::agent
