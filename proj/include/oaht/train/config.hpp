#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oaht/graph/dynamic_graph.hpp"
#include "oaht/value/utility_heads.hpp"
#include "oaht/world/types.hpp"

namespace oaht::train {

struct ExperimentConfig {
  std::string preset = "ciao-c";
  world::EnvKind env = world::EnvKind::Wolfpack;
  graph::Topology topology = graph::Topology::Complete;
  value::RangeConstraint pair_range = value::RangeConstraint::Pos;
  value::RangeConstraint indiv_range = value::RangeConstraint::Pos;
  double lambda = 0.5;  // weight_regularizer

  double lr = 0.00025;
  double gamma = 0.99;
  double tau = 0.001;
  int update_frequency = 4;
  int num_envs = 16;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_fraction = 0.3;  // share of max_num_steps over which eps decays linearly
  int eps_length = 200;
  std::int64_t max_num_steps = 60000;  // vectorized steps; episodes = max_num_steps / eps_length
  double weight_predict = 1.0;

  int num_players_train = 3;
  std::vector<int> num_players_test{5, 9};
  int saving_frequency = 50;
  int eval_eps = 5;
  std::uint64_t eval_init_seed = 2500;
  std::uint64_t seed = 0;

  std::size_t embedding_dim = 64;
  std::size_t hidden_dim = 64;
  int rank = 3;

  // World geometry; 0 selects the environment default.
  int rows = 0;
  int cols = 0;
  double prey_flee_probability = 1.0;

  void validate() const;
  int num_episodes() const;
  int num_actions() const;
  world::WorldConfig world_config(int max_agents) const;
};

std::vector<std::string> preset_names();
// Applies the (topology, pair_range, indiv_range, lambda) tuple of a preset.
// Suffix "-nr" on a CIAO preset sets lambda to 0.
ExperimentConfig apply_preset(ExperimentConfig base, const std::string& preset);

// Canonical JSON: keys sorted, compact. Missing keys keep their defaults.
std::string to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

}  // namespace oaht::train
