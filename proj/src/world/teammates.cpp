#include "oaht/world/teammates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oaht/errors.hpp"

namespace oaht::world {

namespace {

Pos nearest_target(const std::vector<Pos>& targets, Pos from) {
  Pos best = targets.front();
  for (Pos p : targets) {
    if (manhattan(from, p) < manhattan(from, best)) best = p;
  }
  return best;
}

Pos target_nearest_centroid(const GridState& world, const std::vector<Pos>& targets) {
  double cr = 0.0, cc = 0.0;
  for (const auto& a : world.agents) {
    cr += a.pos.row;
    cc += a.pos.col;
  }
  cr /= static_cast<double>(world.agents.size());
  cc /= static_cast<double>(world.agents.size());
  Pos best = targets.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (Pos p : targets) {
    const double d = (p.row - cr) * (p.row - cr) + (p.col - cc) * (p.col - cc);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

int chase(EnvKind env, const GridState& world, Pos from, Pos target) {
  if (manhattan(from, target) == 1) return env == EnvKind::Lbf ? kLoad : kStay;
  return greedy_step(world, from, target);
}

}  // namespace

int greedy_step(const GridState& world, Pos from, Pos target) {
  const int d0 = manhattan(from, target);
  if (d0 <= 1) return kStay;
  int fallback = kStay;
  for (int action = kNorth; action <= kWest; ++action) {
    const Pos next = moved(from, action);
    if (!world.in_bounds(next) || manhattan(next, target) >= d0) continue;
    if (!world.occupied(next)) return action;
    if (fallback == kStay) fallback = action;
  }
  return fallback;
}

std::vector<double> greedy_probabilistic_distribution(EnvKind env, const GridState& world, AgentId agent,
                                                      double temperature) {
  const AgentState* self = world.find(agent);
  if (!self) throw DomainError("agent is not active");
  const auto targets = world.targets();
  auto nearest = [&](Pos p) {
    int d = std::numeric_limits<int>::max();
    for (Pos t : targets) d = std::min(d, manhattan(p, t));
    return d;
  };
  const int n = num_actions(env);
  const int here = nearest(self->pos);
  std::vector<double> logits(n);
  for (int action = 0; action < n; ++action) {
    int d;
    if (action == kLoad) {
      d = here == 1 ? 0 : here + 1;
    } else {
      Pos next = moved(self->pos, action);
      if (!world.in_bounds(next) || (next != self->pos && world.occupied(next))) next = self->pos;
      d = nearest(next);
    }
    logits[action] = -static_cast<double>(d) / temperature;
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double& l : logits) {
    l = std::exp(l - m);
    z += l;
  }
  for (double& l : logits) l /= z;
  return logits;
}

int teammate_policy(AgentType type, EnvKind env, const GridState& world, int t, AgentId agent,
                    std::uint64_t policy_seed) {
  const AgentState* self = world.find(agent);
  if (!self) throw DomainError("teammate " + std::to_string(agent) + " is not active");
  const auto targets = world.targets();
  const double u = counter_uniform(policy_seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(agent));
  switch (type) {
    case AgentType::Random:
      return std::min(static_cast<int>(u * num_actions(env)), num_actions(env) - 1);
    case AgentType::Greedy:
      if (targets.empty()) return kStay;
      return chase(env, world, self->pos, nearest_target(targets, self->pos));
    case AgentType::TeammateAware:
      if (targets.empty()) return kStay;
      return chase(env, world, self->pos, target_nearest_centroid(world, targets));
    case AgentType::GreedyProbabilistic: {
      if (targets.empty()) return kStay;
      const auto p = greedy_probabilistic_distribution(env, world, agent);
      double acc = 0.0;
      for (std::size_t a = 0; a < p.size(); ++a) {
        acc += p[a];
        if (u < acc) return static_cast<int>(a);
      }
      return static_cast<int>(p.size()) - 1;
    }
    case AgentType::Learner:
      break;
  }
  throw DomainError("no scripted policy for agent type " + to_string(type));
}

}  // namespace oaht::world
