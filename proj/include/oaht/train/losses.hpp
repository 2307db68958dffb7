#pragma once

#include <map>
#include <random>
#include <span>
#include <vector>

#include "oaht/agent/agent_model.hpp"
#include "oaht/value/value_model.hpp"

namespace oaht::train {

struct TransitionRecord {
  world::ObsBatch obs;
  agent::EmbeddingTable value_prev;  // detached value-encoder state before t
  agent::EmbeddingTable agent_prev;  // detached agent-encoder state before t
  graph::DynamicAffinityGraph graph;
  std::map<AgentId, int> actions;  // learner and teammates
  double reward = 0.0;             // shifted, >= 0
  world::ObsBatch next_obs;
  agent::EmbeddingTable value_next_prev;  // value-encoder state at t
  agent::EmbeddingTable agent_next_prev;
  graph::DynamicAffinityGraph next_graph;
  bool done = false;
  std::vector<AgentId> joined;
  std::vector<AgentId> left;
};

// raw - lower_bound; raw below the bound is an environment contract violation.
double shift_reward(double raw, double env_reward_lower_bound);

// Argmax (lowest index on ties) with probability 1 - eps, uniform otherwise.
int act(std::span<const double> values, double eps, std::mt19937_64& rng);

struct LossContext {
  const value::ValueModel* value = nullptr;
  const agent::AgentModel* agent = nullptr;
  const nn::ParameterStore* agent_params = nullptr;
  const nn::ParameterStore* target = nullptr;
  // Parameters for the constant operand of the regularizer; the online
  // parameters are used when null.
  const nn::ParameterStore* reg_reference = nullptr;
  double gamma = 0.99;
  graph::Topology topology = graph::Topology::Complete;
  double lambda = 0.5;
};

struct LossReport {
  double td = 0.0;
  double reg = 0.0;
  double total = 0.0;
};

// Bootstrap target y = r + gamma * max_a learner_action_values(t+1) under the
// target parameters and the agent model; y = r on terminal transitions.
double td_target(const LossContext& ctx, const TransitionRecord& rec);

// Mean over the batch of 1/2 (y - Q)^2, the topology regularizer, and
// td + lambda * reg. Gradients of the total w.r.t. `online` are accumulated
// when `accumulate` is true; targets are precomputed when `targets` is given.
LossReport value_losses(const LossContext& ctx, nn::ParameterStore& online, std::span<const TransitionRecord> batch,
                        bool accumulate, std::span<const double> targets = {});

double td_loss(const LossContext& ctx, nn::ParameterStore& online, std::span<const TransitionRecord> batch);
double regularizer(const LossContext& ctx, nn::ParameterStore& online, std::span<const TransitionRecord> batch);
double total_loss(const LossContext& ctx, nn::ParameterStore& online, std::span<const TransitionRecord> batch);

// Star: 1/2 (sum_{j != i} Q_j - Q_i)^2; Complete: sum_{j != i} 1/2 (Q_i - Q_j)^2.
// `reference` supplies the constant operand, `online` the differentiated one.
double regularizer_term(graph::Topology topology, std::span<const double> reference, std::span<const double> online);

std::vector<agent::AgentModelSample> agent_samples(std::span<const TransitionRecord> batch);

}  // namespace oaht::train
