#include "oaht/world/types.hpp"

#include <cstdlib>

#include "oaht/errors.hpp"

namespace oaht::world {

std::string to_string(EnvKind kind) { return kind == EnvKind::Wolfpack ? "wolfpack" : "lbf"; }

EnvKind parse_env_kind(const std::string& name) {
  if (name == "wolfpack") return EnvKind::Wolfpack;
  if (name == "lbf") return EnvKind::Lbf;
  throw DomainError("unknown environment kind: " + name);
}

int num_actions(EnvKind kind) { return kind == EnvKind::Wolfpack ? 5 : 6; }

int manhattan(Pos a, Pos b) { return std::abs(a.row - b.row) + std::abs(a.col - b.col); }

Pos moved(Pos p, int action) {
  switch (action) {
    case kNorth:
      return {p.row - 1, p.col};
    case kEast:
      return {p.row, p.col + 1};
    case kSouth:
      return {p.row + 1, p.col};
    case kWest:
      return {p.row, p.col - 1};
    default:
      return p;
  }
}

std::string to_string(AgentType type) {
  switch (type) {
    case AgentType::Learner:
      return "learner";
    case AgentType::Random:
      return "random";
    case AgentType::Greedy:
      return "greedy";
    case AgentType::GreedyProbabilistic:
      return "greedy_probabilistic";
    case AgentType::TeammateAware:
      return "teammate_aware";
  }
  return "unknown";
}

AgentType parse_agent_type(const std::string& name) {
  for (auto t : {AgentType::Learner, AgentType::Random, AgentType::Greedy, AgentType::GreedyProbabilistic,
                 AgentType::TeammateAware}) {
    if (to_string(t) == name) return t;
  }
  throw DomainError("unknown agent type: " + name);
}

void OpennessConfig::validate() const {
  if (max_agents < 2) throw DomainError("max_agents must be >= 2");
  for (const auto& iv : {active_duration, dead_duration}) {
    if (iv.lo < 1 || iv.lo > iv.hi) throw DomainError("duration interval must satisfy 1 <= lo <= hi");
  }
}

OpennessConfig OpennessConfig::defaults(EnvKind kind, int max_agents) {
  if (kind == EnvKind::Wolfpack) return {max_agents, {25, 35}, {15, 25}};
  return {max_agents, {15, 25}, {10, 20}};
}

void WorldConfig::validate() const {
  openness.validate();
  if (rows < 2 || cols < 2) throw DomainError("grid must be at least 2x2");
  if (eps_length < 1) throw DomainError("eps_length must be >= 1");
  if (teammate_types.empty()) throw DomainError("at least one teammate type is required");
  for (auto t : teammate_types) {
    if (t == AgentType::Learner) throw DomainError("learner is not a teammate type");
  }
  const int cells = rows * cols;
  if (env == EnvKind::Wolfpack) {
    if (num_prey < 1) throw DomainError("num_prey must be >= 1");
    if (capture_reward < 0.0 || close_penalty < 0.0) throw DomainError("reward magnitudes must be >= 0");
    if (!(prey_flee_probability >= 0.0 && prey_flee_probability <= 1.0)) {
      throw DomainError("prey_flee_probability must lie in [0, 1]");
    }
    if (openness.max_agents + num_prey >= cells) throw DomainError("grid too small for agents and prey");
  } else {
    if (num_food < 1) throw DomainError("num_food must be >= 1");
    if (agent_level.lo < 1 || agent_level.lo > agent_level.hi || food_level.lo < 1 ||
        food_level.lo > food_level.hi) {
      throw DomainError("invalid level interval");
    }
    if (openness.max_agents + num_food >= cells) throw DomainError("grid too small for agents and food");
  }
}

double WorldConfig::reward_lower_bound() const {
  return env == EnvKind::Wolfpack ? -close_penalty * num_prey : 0.0;
}

WorldConfig WorldConfig::defaults(EnvKind kind, int max_agents) {
  WorldConfig c;
  c.env = kind;
  c.openness = OpennessConfig::defaults(kind, max_agents);
  if (kind == EnvKind::Lbf) {
    c.rows = 8;
    c.cols = 8;
  }
  return c;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace oaht::world
