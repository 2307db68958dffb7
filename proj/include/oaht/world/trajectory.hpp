#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "oaht/world/open_world.hpp"

namespace oaht::world {

struct TrajectoryRecord {
  int t = 0;
  std::vector<AgentId> active;
  std::map<AgentId, AgentType> types;
  std::map<AgentId, int> actions;  // learner and teammates
  double reward = 0.0;
  std::vector<AgentId> joined;
  std::vector<AgentId> left;
  bool operator==(const TrajectoryRecord&) const = default;
};

struct Trajectory {
  WorldConfig config;
  std::uint64_t seed = 0;
  std::vector<TrajectoryRecord> records;
};

std::string world_config_json(const WorldConfig& cfg);
WorldConfig parse_world_config_json(const std::string& text);

// Line-delimited JSON: a header line {"env", "seed", "config"} followed by one
// record per timestep.
void write_trajectory(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory(std::istream& in);

// Steps a fresh world with the learner actions recorded in `traj` and returns
// the regenerated records.
std::vector<TrajectoryRecord> replay(const Trajectory& traj);

// Runs one episode with a learner that draws uniformly random actions from
// `learner_seed`.
Trajectory simulate_random_episode(const WorldConfig& cfg, std::uint64_t seed, std::uint64_t learner_seed);

}  // namespace oaht::world
