#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "oaht/nn/optimizer.hpp"
#include "oaht/train/config.hpp"
#include "oaht/train/losses.hpp"
#include "oaht/world/open_world.hpp"

namespace oaht::train {

struct EpisodeMetrics {
  int episode = 0;
  std::int64_t steps = 0;  // vectorized steps completed
  double mean_return = 0.0;
  double td_loss = 0.0;
  double reg_loss = 0.0;
  double agent_nll = 0.0;  // mean -log q per teammate prediction
  double epsilon = 0.0;
};

enum class EvalPolicy { Greedy, UniformRandom };

// Training loop: per episode the buffer is cleared and num_envs worlds are
// rolled out in lockstep; every update_frequency steps the value network is
// fitted on the transitions of that window, the agent model is fitted on the
// same window, and the target network is soft-updated.
class Trainer {
 public:
  explicit Trainer(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  const value::ValueModel& value_model() const { return value_; }
  const agent::AgentModel& agent_model() const { return agent_; }
  const nn::ParameterStore& online() const { return online_; }
  const nn::ParameterStore& target() const { return target_; }
  const nn::ParameterStore& agent_params() const { return agent_params_; }
  LossContext loss_context() const;

  int episodes_done() const { return episode_; }
  std::int64_t steps_done() const { return steps_; }
  double epsilon() const;

  EpisodeMetrics train_episode();
  // Losses of the first update window, evaluated before any parameter change.
  const std::optional<LossReport>& first_update() const { return first_update_; }

  // Mean shifted episode return over `episodes` evaluation worlds seeded from
  // eval_init_seed. Never mutates training state.
  double evaluate(int max_agents, int episodes, EvalPolicy policy = EvalPolicy::Greedy) const;

  // Bundle with prefixes "online/", "target/", "agent/".
  nn::ParameterStore checkpoint() const;
  void load_checkpoint(const nn::ParameterStore& bundle);

 private:
  void update(std::span<const TransitionRecord> window, EpisodeMetrics& acc, int& updates);

  ExperimentConfig config_;
  world::WorldConfig train_world_;
  value::ValueModel value_;
  agent::AgentModel agent_;
  nn::ParameterStore online_;
  nn::ParameterStore target_;
  nn::ParameterStore agent_params_;
  nn::Optimizer value_opt_;
  nn::Optimizer agent_opt_;
  std::mt19937_64 rng_;
  int episode_ = 0;
  std::int64_t steps_ = 0;
  std::optional<LossReport> first_update_;
};

}  // namespace oaht::train
