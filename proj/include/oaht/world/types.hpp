#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "oaht/graph/dynamic_graph.hpp"

namespace oaht::world {

enum class EnvKind { Wolfpack, Lbf };
std::string to_string(EnvKind kind);
EnvKind parse_env_kind(const std::string& name);

// Action indices. Wolfpack uses the first five; LBF adds Load.
inline constexpr int kNorth = 0;
inline constexpr int kEast = 1;
inline constexpr int kSouth = 2;
inline constexpr int kWest = 3;
inline constexpr int kStay = 4;
inline constexpr int kLoad = 5;
int num_actions(EnvKind kind);

struct Pos {
  int row = 0;
  int col = 0;
  auto operator<=>(const Pos&) const = default;
};
int manhattan(Pos a, Pos b);
Pos moved(Pos p, int action);  // North decreases row; non-move actions return p

struct Interval {
  int lo = 1;
  int hi = 1;
  bool contains(int v) const { return v >= lo && v <= hi; }
  auto operator<=>(const Interval&) const = default;
};

enum class AgentType { Learner, Random, Greedy, GreedyProbabilistic, TeammateAware };
std::string to_string(AgentType type);
AgentType parse_agent_type(const std::string& name);

struct OpennessConfig {
  int max_agents = 3;
  Interval active_duration{25, 35};
  Interval dead_duration{15, 25};
  void validate() const;
  static OpennessConfig defaults(EnvKind kind, int max_agents);
};

struct WorldConfig {
  EnvKind env = EnvKind::Wolfpack;
  int rows = 10;
  int cols = 10;
  int eps_length = 200;
  OpennessConfig openness;
  std::vector<AgentType> teammate_types{AgentType::Random, AgentType::Greedy, AgentType::GreedyProbabilistic,
                                        AgentType::TeammateAware};
  // Wolfpack
  int num_prey = 1;
  double capture_reward = 2.0;
  double close_penalty = 0.5;
  double prey_flee_probability = 1.0;
  // LBF
  int num_food = 3;
  Interval agent_level{1, 3};
  Interval food_level{2, 4};

  void validate() const;
  double reward_lower_bound() const;
  static WorldConfig defaults(EnvKind kind, int max_agents);
};

// Stateless 64-bit mixer used for counter-based randomness.
std::uint64_t splitmix64(std::uint64_t x);
// Uniform double in [0, 1) determined by the arguments alone.
double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

}  // namespace oaht::world
