#include "oaht/train/config.hpp"

#include <json.hpp>

#include "oaht/errors.hpp"

namespace oaht::train {

using nlohmann::json;
using value::RangeConstraint;

void ExperimentConfig::validate() const {
  if (lambda < 0.0) throw DomainError("lambda must be >= 0");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("tau must lie in [0, 1]");
  if (lr < 0.0) throw DomainError("lr must be >= 0");
  if (update_frequency < 1 || num_envs < 1 || eps_length < 1) throw DomainError("counts must be >= 1");
  if (!(eps_start >= 0.0 && eps_start <= 1.0 && eps_end >= 0.0 && eps_end <= 1.0)) {
    throw DomainError("epsilon bounds must lie in [0, 1]");
  }
  if (!(eps_fraction > 0.0 && eps_fraction <= 1.0)) throw DomainError("eps_fraction must lie in (0, 1]");
  if (max_num_steps < eps_length) throw DomainError("max_num_steps must cover at least one episode");
  if (num_players_train < 2) throw DomainError("num_players_train must be >= 2");
  for (int p : num_players_test) {
    if (p < 2) throw DomainError("num_players_test entries must be >= 2");
  }
  if (saving_frequency < 1 || eval_eps < 1) throw DomainError("saving_frequency and eval_eps must be >= 1");
  if (embedding_dim < 1 || hidden_dim < 1) throw DomainError("network widths must be >= 1");
  if (rank < 1 || rank >= num_actions()) throw DomainError("rank must satisfy 1 <= K < |A|");
  if (weight_predict < 0.0) throw DomainError("weight_predict must be >= 0");
  world_config(num_players_train).validate();
}

int ExperimentConfig::num_episodes() const { return static_cast<int>(max_num_steps / eps_length); }

int ExperimentConfig::num_actions() const { return world::num_actions(env); }

world::WorldConfig ExperimentConfig::world_config(int max_agents) const {
  auto w = world::WorldConfig::defaults(env, max_agents);
  if (rows > 0) w.rows = rows;
  if (cols > 0) w.cols = cols;
  w.eps_length = eps_length;
  w.prey_flee_probability = prey_flee_probability;
  return w;
}

namespace {

struct PresetRow {
  const char* name;
  double lambda;
  graph::Topology topology;
  RangeConstraint pair;
  RangeConstraint indiv;
};

constexpr RangeConstraint F = RangeConstraint::Free;
constexpr RangeConstraint P = RangeConstraint::Pos;
constexpr RangeConstraint N = RangeConstraint::Neg;
constexpr RangeConstraint Z = RangeConstraint::Zero;
constexpr auto S = graph::Topology::Star;
constexpr auto C = graph::Topology::Complete;

constexpr PresetRow kPresets[] = {
    {"gpl", 0.0, C, F, F},        {"ciao-s", 0.5, S, P, P},    {"ciao-s-np", 0.5, S, N, P},
    {"ciao-s-fi", 0.5, S, P, F},  {"ciao-s-zi", 0.5, S, P, Z}, {"ciao-s-ni", 0.5, S, P, N},
    {"ciao-c", 0.5, C, P, P},     {"ciao-c-np", 0.5, C, N, P}, {"ciao-c-fi", 0.5, C, P, F},
    {"ciao-c-zi", 0.5, C, P, Z},  {"ciao-c-ni", 0.5, C, P, N},
};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& row : kPresets) out.emplace_back(row.name);
  out.emplace_back("ciao-s-nr");
  out.emplace_back("ciao-c-nr");
  return out;
}

ExperimentConfig apply_preset(ExperimentConfig base, const std::string& preset) {
  std::string key = preset;
  bool no_reg = false;
  if (key.size() > 3 && key.compare(key.size() - 3, 3, "-nr") == 0 && key != "gpl") {
    key = key.substr(0, key.size() - 3);
    no_reg = true;
  }
  for (const auto& row : kPresets) {
    if (key != row.name) continue;
    base.preset = preset;
    base.topology = row.topology;
    base.pair_range = row.pair;
    base.indiv_range = row.indiv;
    base.lambda = no_reg ? 0.0 : row.lambda;
    return base;
  }
  throw DomainError("unknown preset: " + preset);
}

std::string to_json(const ExperimentConfig& c) {
  json j;
  j["preset"] = c.preset;
  j["env"] = world::to_string(c.env);
  j["topology"] = graph::to_string(c.topology);
  j["pair_range"] = value::to_string(c.pair_range);
  j["indiv_range"] = value::to_string(c.indiv_range);
  j["lambda"] = c.lambda;
  j["lr"] = c.lr;
  j["gamma"] = c.gamma;
  j["tau"] = c.tau;
  j["update_frequency"] = c.update_frequency;
  j["num_envs"] = c.num_envs;
  j["eps_start"] = c.eps_start;
  j["eps_end"] = c.eps_end;
  j["eps_fraction"] = c.eps_fraction;
  j["eps_length"] = c.eps_length;
  j["max_num_steps"] = c.max_num_steps;
  j["weight_predict"] = c.weight_predict;
  j["num_players_train"] = c.num_players_train;
  j["num_players_test"] = c.num_players_test;
  j["saving_frequency"] = c.saving_frequency;
  j["eval_eps"] = c.eval_eps;
  j["eval_init_seed"] = c.eval_init_seed;
  j["seed"] = c.seed;
  j["embedding_dim"] = c.embedding_dim;
  j["hidden_dim"] = c.hidden_dim;
  j["rank"] = c.rank;
  j["rows"] = c.rows;
  j["cols"] = c.cols;
  j["prey_flee_probability"] = c.prey_flee_probability;
  return j.dump();
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  ExperimentConfig c;
  try {
    if (j.contains("preset")) c = apply_preset(c, j["preset"].get<std::string>());
    if (j.contains("env")) c.env = world::parse_env_kind(j["env"].get<std::string>());
    if (j.contains("topology")) c.topology = graph::parse_topology(j["topology"].get<std::string>());
    if (j.contains("pair_range")) c.pair_range = value::parse_range(j["pair_range"].get<std::string>());
    if (j.contains("indiv_range")) c.indiv_range = value::parse_range(j["indiv_range"].get<std::string>());
    c.lambda = j.value("lambda", c.lambda);
    c.lr = j.value("lr", c.lr);
    c.gamma = j.value("gamma", c.gamma);
    c.tau = j.value("tau", c.tau);
    c.update_frequency = j.value("update_frequency", c.update_frequency);
    c.num_envs = j.value("num_envs", c.num_envs);
    c.eps_start = j.value("eps_start", c.eps_start);
    c.eps_end = j.value("eps_end", c.eps_end);
    c.eps_fraction = j.value("eps_fraction", c.eps_fraction);
    c.eps_length = j.value("eps_length", c.eps_length);
    c.max_num_steps = j.value("max_num_steps", c.max_num_steps);
    c.weight_predict = j.value("weight_predict", c.weight_predict);
    c.num_players_train = j.value("num_players_train", c.num_players_train);
    if (j.contains("num_players_test")) c.num_players_test = j["num_players_test"].get<std::vector<int>>();
    c.saving_frequency = j.value("saving_frequency", c.saving_frequency);
    c.eval_eps = j.value("eval_eps", c.eval_eps);
    c.eval_init_seed = j.value("eval_init_seed", c.eval_init_seed);
    c.seed = j.value("seed", c.seed);
    c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
    c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
    c.rank = j.value("rank", c.rank);
    c.rows = j.value("rows", c.rows);
    c.cols = j.value("cols", c.cols);
    c.prey_flee_probability = j.value("prey_flee_probability", c.prey_flee_probability);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace oaht::train
