#include "oaht/world/grid_world.hpp"

#include <algorithm>
#include <limits>

#include "oaht/errors.hpp"

namespace oaht::world {

bool GridState::occupied(Pos p) const {
  for (const auto& a : agents) {
    if (a.pos == p) return true;
  }
  for (const auto& q : prey) {
    if (q == p) return true;
  }
  for (const auto& f : food) {
    if (f.pos == p) return true;
  }
  return false;
}

const AgentState* GridState::find(AgentId id) const {
  for (const auto& a : agents) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

AgentState* GridState::find(AgentId id) {
  for (auto& a : agents) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

std::vector<Pos> GridState::targets() const {
  if (!prey.empty()) return prey;
  std::vector<Pos> out;
  for (const auto& f : food) out.push_back(f.pos);
  return out;
}

Pos random_free_cell(const GridState& g, std::mt19937_64& rng) {
  std::vector<Pos> free;
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      if (!g.occupied({r, c})) free.push_back({r, c});
    }
  }
  if (free.empty()) throw CapacityError("no free grid cell");
  return free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
}

void spawn_food_set(GridState& g, const WorldConfig& cfg, std::mt19937_64& rng) {
  g.food.clear();
  g.food_set_total = 0;
  std::uniform_int_distribution<int> level(cfg.food_level.lo, cfg.food_level.hi);
  for (int i = 0; i < cfg.num_food; ++i) {
    Food f{random_free_cell(g, rng), level(rng)};
    g.food_set_total += f.level;
    g.food.push_back(f);
  }
}

void resolve_moves(GridState& g, const std::map<AgentId, int>& actions) {
  for (auto& a : g.agents) {
    auto it = actions.find(a.id);
    if (it == actions.end()) throw DomainError("missing action for active agent " + std::to_string(a.id));
    const Pos next = moved(a.pos, it->second);
    if (next == a.pos || !g.in_bounds(next) || g.occupied(next)) continue;
    a.pos = next;
  }
}

namespace {

int adjacent_count(const GridState& g, Pos p) {
  int k = 0;
  for (const auto& a : g.agents) k += manhattan(a.pos, p) == 1 ? 1 : 0;
  return k;
}

}  // namespace

double wolfpack_step(GridState& g, const std::map<AgentId, int>& actions, const WorldConfig& cfg,
                     std::mt19937_64& rng) {
  resolve_moves(g, actions);
  double reward = 0.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& prey : g.prey) {
    const int k = adjacent_count(g, prey);
    if (k >= 2) {
      reward += cfg.capture_reward * k * (k - 1) / 2.0;
      prey = Pos{-1, -1};
      prey = random_free_cell(g, rng);
      continue;
    }
    if (k == 1) reward -= cfg.close_penalty;

    std::vector<Pos> options;
    for (int action = kNorth; action <= kStay; ++action) {
      const Pos next = moved(prey, action);
      if (next == prey || (g.in_bounds(next) && !g.occupied(next))) options.push_back(next);
    }
    if (unit(rng) < cfg.prey_flee_probability) {
      int best = std::numeric_limits<int>::min();
      std::vector<Pos> argmax;
      for (Pos p : options) {
        int nearest = std::numeric_limits<int>::max();
        for (const auto& a : g.agents) nearest = std::min(nearest, manhattan(a.pos, p));
        if (nearest > best) {
          best = nearest;
          argmax.clear();
        }
        if (nearest == best) argmax.push_back(p);
      }
      options = std::move(argmax);
    }
    prey = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
  }
  return reward;
}

double lbf_step(GridState& g, const std::map<AgentId, int>& actions, const WorldConfig& cfg, std::mt19937_64& rng) {
  resolve_moves(g, actions);
  double reward = 0.0;
  std::vector<Food> remaining;
  for (const auto& f : g.food) {
    int load = 0;
    for (const auto& a : g.agents) {
      if (actions.at(a.id) == kLoad && manhattan(a.pos, f.pos) == 1) load += a.level;
    }
    if (load >= f.level) {
      reward += static_cast<double>(f.level) / g.food_set_total;
    } else {
      remaining.push_back(f);
    }
  }
  g.food = std::move(remaining);
  if (g.food.empty()) spawn_food_set(g, cfg, rng);
  return reward;
}

}  // namespace oaht::world
