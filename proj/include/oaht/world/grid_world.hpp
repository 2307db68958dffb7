#pragma once

#include <map>
#include <optional>
#include <random>
#include <vector>

#include "oaht/world/types.hpp"

namespace oaht::world {

struct AgentState {
  AgentId id = 0;
  AgentType type = AgentType::Random;
  Pos pos;
  int level = 0;      // LBF only
  int remaining = 0;  // active timer; 0 for the learner
  auto operator<=>(const AgentState&) const = default;
};

struct Food {
  Pos pos;
  int level = 1;
  auto operator<=>(const Food&) const = default;
};

// Environment-specific grid state. Agents are kept in ascending id order.
struct GridState {
  int rows = 0;
  int cols = 0;
  std::vector<AgentState> agents;
  std::vector<Pos> prey;   // Wolfpack
  std::vector<Food> food;  // LBF, uncollected items of the current set
  int food_set_total = 0;  // sum of levels of the current food set
  bool operator==(const GridState&) const = default;

  bool in_bounds(Pos p) const { return p.row >= 0 && p.row < rows && p.col >= 0 && p.col < cols; }
  bool occupied(Pos p) const;
  const AgentState* find(AgentId id) const;
  AgentState* find(AgentId id);
  // Targets that agents chase: prey for Wolfpack, food for LBF.
  std::vector<Pos> targets() const;
};

Pos random_free_cell(const GridState& g, std::mt19937_64& rng);
void spawn_food_set(GridState& g, const WorldConfig& cfg, std::mt19937_64& rng);

// Moves agents sequentially in id order; a move into a wall or occupied cell
// leaves the agent in place.
void resolve_moves(GridState& g, const std::map<AgentId, int>& actions);

// Wolfpack: after agent moves, a prey with k >= 2 adjacent agents is captured
// for capture_reward * k(k-1)/2 and respawns; a prey with exactly one adjacent
// agent costs close_penalty. Uncaptured prey then flee.
double wolfpack_step(GridState& g, const std::map<AgentId, int>& actions, const WorldConfig& cfg,
                     std::mt19937_64& rng);

// LBF: a food item is collected when the summed level of adjacent agents that
// chose Load is at least its level; the team receives level / food_set_total.
double lbf_step(GridState& g, const std::map<AgentId, int>& actions, const WorldConfig& cfg, std::mt19937_64& rng);

}  // namespace oaht::world
