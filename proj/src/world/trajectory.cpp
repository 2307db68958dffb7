#include "oaht/world/trajectory.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "oaht/errors.hpp"

namespace oaht::world {

using nlohmann::json;

namespace {

json interval_json(Interval iv) { return json::array({iv.lo, iv.hi}); }

Interval parse_interval(const json& j) {
  if (!j.is_array() || j.size() != 2) throw DomainError("interval must be [lo, hi]");
  return {j[0].get<int>(), j[1].get<int>()};
}

json config_to_json(const WorldConfig& c) {
  json types = json::array();
  for (auto t : c.teammate_types) types.push_back(to_string(t));
  return {{"env", to_string(c.env)},
          {"rows", c.rows},
          {"cols", c.cols},
          {"eps_length", c.eps_length},
          {"max_agents", c.openness.max_agents},
          {"active_duration", interval_json(c.openness.active_duration)},
          {"dead_duration", interval_json(c.openness.dead_duration)},
          {"teammate_types", types},
          {"num_prey", c.num_prey},
          {"capture_reward", c.capture_reward},
          {"close_penalty", c.close_penalty},
          {"prey_flee_probability", c.prey_flee_probability},
          {"num_food", c.num_food},
          {"agent_level", interval_json(c.agent_level)},
          {"food_level", interval_json(c.food_level)}};
}

WorldConfig config_from_json(const json& j) {
  const EnvKind env = parse_env_kind(j.at("env").get<std::string>());
  WorldConfig c = WorldConfig::defaults(env, j.value("max_agents", 3));
  c.rows = j.value("rows", c.rows);
  c.cols = j.value("cols", c.cols);
  c.eps_length = j.value("eps_length", c.eps_length);
  if (j.contains("active_duration")) c.openness.active_duration = parse_interval(j["active_duration"]);
  if (j.contains("dead_duration")) c.openness.dead_duration = parse_interval(j["dead_duration"]);
  if (j.contains("teammate_types")) {
    c.teammate_types.clear();
    for (const auto& t : j["teammate_types"]) c.teammate_types.push_back(parse_agent_type(t.get<std::string>()));
  }
  c.num_prey = j.value("num_prey", c.num_prey);
  c.capture_reward = j.value("capture_reward", c.capture_reward);
  c.close_penalty = j.value("close_penalty", c.close_penalty);
  c.prey_flee_probability = j.value("prey_flee_probability", c.prey_flee_probability);
  c.num_food = j.value("num_food", c.num_food);
  if (j.contains("agent_level")) c.agent_level = parse_interval(j["agent_level"]);
  if (j.contains("food_level")) c.food_level = parse_interval(j["food_level"]);
  c.validate();
  return c;
}

json record_to_json(const TrajectoryRecord& r) {
  json types = json::object();
  for (const auto& [id, t] : r.types) types[std::to_string(id)] = to_string(t);
  json actions = json::object();
  for (const auto& [id, a] : r.actions) actions[std::to_string(id)] = a;
  return {{"t", r.t},         {"active", r.active}, {"types", types}, {"actions", actions},
          {"reward", r.reward}, {"joined", r.joined}, {"left", r.left}};
}

TrajectoryRecord record_from_json(const json& j) {
  TrajectoryRecord r;
  r.t = j.at("t").get<int>();
  r.active = j.at("active").get<std::vector<AgentId>>();
  for (const auto& [k, v] : j.at("types").items()) r.types.emplace(std::stoi(k), parse_agent_type(v.get<std::string>()));
  for (const auto& [k, v] : j.at("actions").items()) r.actions.emplace(std::stoi(k), v.get<int>());
  r.reward = j.at("reward").get<double>();
  r.joined = j.at("joined").get<std::vector<AgentId>>();
  r.left = j.at("left").get<std::vector<AgentId>>();
  return r;
}

TrajectoryRecord make_record(const TeamSnapshot& before, int learner_action, const StepOutcome& out) {
  TrajectoryRecord r;
  r.t = before.t;
  r.active = before.active();
  r.types = before.hidden_types();
  r.actions = out.teammate_actions;
  r.actions[kLearnerId] = learner_action;
  r.reward = out.reward;
  r.joined = out.joined;
  r.left = out.left;
  return r;
}

}  // namespace

std::string world_config_json(const WorldConfig& cfg) { return config_to_json(cfg).dump(); }

WorldConfig parse_world_config_json(const std::string& text) {
  try {
    return config_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed world config: ") + e.what());
  }
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << json{{"env", to_string(traj.config.env)}, {"seed", traj.seed}, {"config", config_to_json(traj.config)}}.dump()
      << '\n';
  for (const auto& r : traj.records) out << record_to_json(r).dump() << '\n';
}

Trajectory read_trajectory(std::istream& in) {
  Trajectory traj;
  std::string line;
  try {
    if (!std::getline(in, line)) throw DomainError("empty trajectory stream");
    const json header = json::parse(line);
    traj.seed = header.at("seed").get<std::uint64_t>();
    traj.config = config_from_json(header.at("config"));
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      traj.records.push_back(record_from_json(json::parse(line)));
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed trajectory: ") + e.what());
  }
  return traj;
}

std::vector<TrajectoryRecord> replay(const Trajectory& traj) {
  OpenWorld world(traj.config);
  world.reset(traj.seed);
  std::vector<TrajectoryRecord> out;
  for (const auto& rec : traj.records) {
    const TeamSnapshot before = world.snapshot();
    const int action = rec.actions.at(kLearnerId);
    const StepOutcome step = world.step(action);
    out.push_back(make_record(before, action, step));
    if (step.done) break;
  }
  return out;
}

Trajectory simulate_random_episode(const WorldConfig& cfg, std::uint64_t seed, std::uint64_t learner_seed) {
  Trajectory traj{cfg, seed, {}};
  OpenWorld world(cfg);
  world.reset(seed);
  std::mt19937_64 rng(learner_seed);
  std::uniform_int_distribution<int> pick(0, world.num_actions() - 1);
  while (true) {
    const TeamSnapshot before = world.snapshot();
    const int action = pick(rng);
    const StepOutcome step = world.step(action);
    traj.records.push_back(make_record(before, action, step));
    if (step.done) break;
  }
  return traj;
}

}  // namespace oaht::world
