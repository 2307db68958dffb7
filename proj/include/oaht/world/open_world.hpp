#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "oaht/nn/parameter_store.hpp"
#include "oaht/world/grid_world.hpp"
#include "oaht/world/openness.hpp"

namespace oaht::world {

// Per-agent observation records <u_t, x_{t,j}>. `shared` (u_t) is common to
// all agents; `own[i]` (x_{t,j}) belongs to `ids[i]`.
struct ObsBatch {
  nn::Vec shared;
  std::vector<AgentId> ids;
  std::vector<nn::Vec> own;
  const nn::Vec& of(AgentId id) const;
  bool operator==(const ObsBatch&) const = default;
};

// Occupancy planes [agents, targets] of size rows*cols each.
std::size_t shared_obs_dim(const WorldConfig& cfg);
// row, col, level, learner flag, active flag, offset to nearest target (2).
inline constexpr std::size_t kOwnObsDim = 7;

struct TeamSnapshot {
  int t = 0;
  EnvKind env = EnvKind::Wolfpack;
  GridState world;
  ObsBatch obs;

  std::vector<AgentId> active() const;
  std::map<AgentId, AgentType> hidden_types() const;
  bool operator==(const TeamSnapshot&) const = default;
};

ObsBatch observe(const GridState& world, EnvKind env);

struct StepOutcome {
  TeamSnapshot next;
  double reward = 0.0;
  bool done = false;
  std::vector<AgentId> joined;
  std::vector<AgentId> left;
  std::map<AgentId, int> teammate_actions;
};

// One open-team environment instance. Owns all randomness; identical
// (config, seed) pairs and learner actions give identical trajectories.
class OpenWorld {
 public:
  explicit OpenWorld(WorldConfig config);

  const WorldConfig& config() const { return config_; }
  const TeamSnapshot& snapshot() const { return snapshot_; }
  const OpennessController& openness() const { return openness_; }
  int num_actions() const { return world::num_actions(config_.env); }

  const TeamSnapshot& reset(std::uint64_t seed);
  StepOutcome step(int learner_action);

 private:
  void refresh_observation();

  WorldConfig config_;
  OpennessController openness_;
  std::mt19937_64 rng_;
  std::uint64_t policy_seed_ = 0;
  TeamSnapshot snapshot_;
  bool started_ = false;
};

}  // namespace oaht::world
