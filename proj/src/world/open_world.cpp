#include "oaht/world/open_world.hpp"

#include <algorithm>
#include <limits>

#include "oaht/errors.hpp"
#include "oaht/world/teammates.hpp"

namespace oaht::world {

const nn::Vec& ObsBatch::of(AgentId id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return own[i];
  }
  throw DomainError("no observation for agent " + std::to_string(id));
}

std::size_t shared_obs_dim(const WorldConfig& cfg) { return 2 * static_cast<std::size_t>(cfg.rows * cfg.cols); }

std::vector<AgentId> TeamSnapshot::active() const {
  std::vector<AgentId> out;
  for (const auto& a : world.agents) out.push_back(a.id);
  return out;
}

std::map<AgentId, AgentType> TeamSnapshot::hidden_types() const {
  std::map<AgentId, AgentType> out;
  for (const auto& a : world.agents) out.emplace(a.id, a.type);
  return out;
}

ObsBatch observe(const GridState& world, EnvKind env) {
  const std::size_t cells = static_cast<std::size_t>(world.rows * world.cols);
  const double level_scale = env == EnvKind::Lbf ? 1.0 / 4.0 : 1.0;
  ObsBatch obs;
  obs.shared.assign(2 * cells, 0.0);
  auto cell = [&](Pos p) { return static_cast<std::size_t>(p.row * world.cols + p.col); };
  for (const auto& a : world.agents) obs.shared[cell(a.pos)] = env == EnvKind::Lbf ? a.level * level_scale : 1.0;
  for (Pos p : world.prey) obs.shared[cells + cell(p)] = 1.0;
  for (const auto& f : world.food) obs.shared[cells + cell(f.pos)] = f.level * level_scale;

  const auto targets = world.targets();
  const double rs = 1.0 / std::max(1, world.rows - 1);
  const double cs = 1.0 / std::max(1, world.cols - 1);
  for (const auto& a : world.agents) {
    nn::Vec x(kOwnObsDim, 0.0);
    x[0] = a.pos.row * rs;
    x[1] = a.pos.col * cs;
    x[2] = env == EnvKind::Lbf ? a.level / 3.0 : 0.0;
    x[3] = a.id == kLearnerId ? 1.0 : 0.0;
    x[4] = 1.0;
    if (!targets.empty()) {
      Pos best = targets.front();
      for (Pos p : targets) {
        if (manhattan(a.pos, p) < manhattan(a.pos, best)) best = p;
      }
      x[5] = (best.row - a.pos.row) * rs;
      x[6] = (best.col - a.pos.col) * cs;
    }
    obs.ids.push_back(a.id);
    obs.own.push_back(std::move(x));
  }
  return obs;
}

OpenWorld::OpenWorld(WorldConfig config)
    : config_(std::move(config)), openness_((config_.validate(), config_.openness), config_.teammate_types) {}

void OpenWorld::refresh_observation() { snapshot_.obs = observe(snapshot_.world, config_.env); }

const TeamSnapshot& OpenWorld::reset(std::uint64_t seed) {
  rng_.seed(seed);
  policy_seed_ = rng_();
  openness_.reset(rng_);
  snapshot_ = TeamSnapshot{};
  snapshot_.env = config_.env;
  GridState& g = snapshot_.world;
  g.rows = config_.rows;
  g.cols = config_.cols;
  std::uniform_int_distribution<int> level(config_.agent_level.lo, config_.agent_level.hi);
  const bool lbf = config_.env == EnvKind::Lbf;
  g.agents.push_back(AgentState{kLearnerId, AgentType::Learner, random_free_cell(g, rng_), lbf ? level(rng_) : 0, 0});
  for (AgentId id : openness_.active_teammates()) {
    const auto& s = openness_.slot(id);
    g.agents.push_back(AgentState{id, s.type, random_free_cell(g, rng_), lbf ? level(rng_) : 0, s.remaining});
  }
  if (lbf) {
    spawn_food_set(g, config_, rng_);
  } else {
    for (int i = 0; i < config_.num_prey; ++i) g.prey.push_back(random_free_cell(g, rng_));
  }
  refresh_observation();
  started_ = true;
  return snapshot_;
}

StepOutcome OpenWorld::step(int learner_action) {
  if (!started_) throw StateError("step called before reset");
  if (learner_action < 0 || learner_action >= num_actions()) throw DomainError("learner action out of range");
  if (snapshot_.t >= config_.eps_length) throw StateError("episode already finished");

  StepOutcome out;
  GridState& g = snapshot_.world;
  std::map<AgentId, int> actions{{kLearnerId, learner_action}};
  for (const auto& a : g.agents) {
    if (a.id == kLearnerId) continue;
    const int action = teammate_policy(a.type, config_.env, g, snapshot_.t, a.id, policy_seed_);
    actions.emplace(a.id, action);
    out.teammate_actions.emplace(a.id, action);
  }

  out.reward = config_.env == EnvKind::Wolfpack ? wolfpack_step(g, actions, config_, rng_)
                                                : lbf_step(g, actions, config_, rng_);

  const auto tick = openness_.tick(rng_);
  std::erase_if(g.agents, [&](const AgentState& a) {
    return std::find(tick.left.begin(), tick.left.end(), a.id) != tick.left.end();
  });
  std::uniform_int_distribution<int> level(config_.agent_level.lo, config_.agent_level.hi);
  const bool lbf = config_.env == EnvKind::Lbf;
  for (AgentId id : tick.joined) {
    const auto& s = openness_.slot(id);
    g.agents.push_back(AgentState{id, s.type, random_free_cell(g, rng_), lbf ? level(rng_) : 0, s.remaining});
  }
  std::sort(g.agents.begin(), g.agents.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (auto& a : g.agents) {
    if (a.id != kLearnerId) a.remaining = openness_.slot(a.id).remaining;
  }

  ++snapshot_.t;
  refresh_observation();
  out.joined = tick.joined;
  out.left = tick.left;
  out.done = snapshot_.t >= config_.eps_length;
  out.next = snapshot_;
  return out;
}

}  // namespace oaht::world
