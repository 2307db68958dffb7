#pragma once

#include <cstdint>
#include <vector>

#include "oaht/world/grid_world.hpp"

namespace oaht::world {

// Action chosen by a scripted teammate. Deterministic in (type, world, t,
// agent, policy_seed); randomized types draw from a counter-based hash.
int teammate_policy(AgentType type, EnvKind env, const GridState& world, int t, AgentId agent,
                    std::uint64_t policy_seed);

// Exact action distribution of the GreedyProbabilistic type.
std::vector<double> greedy_probabilistic_distribution(EnvKind env, const GridState& world, AgentId agent,
                                                      double temperature = 1.0);

// Move that most reduces the distance from `from` to `target`; ties broken
// North < East < South < West; Stay when already adjacent or no move helps.
int greedy_step(const GridState& world, Pos from, Pos target);

}  // namespace oaht::world
