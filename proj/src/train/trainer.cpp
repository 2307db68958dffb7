#include "oaht/train/trainer.hpp"

#include <cmath>
#include <sstream>

#include "oaht/errors.hpp"

namespace oaht::train {

namespace {

value::ValueModelSpec value_spec(const ExperimentConfig& c, const world::WorldConfig& w) {
  return {world::shared_obs_dim(w), world::kOwnObsDim, c.embedding_dim, c.hidden_dim, c.num_actions(),
          c.rank,  c.pair_range,    c.indiv_range};
}

agent::AgentModelSpec agent_spec(const ExperimentConfig& c, const world::WorldConfig& w) {
  return {world::shared_obs_dim(w), world::kOwnObsDim, c.embedding_dim, c.hidden_dim, c.num_actions()};
}

std::uint64_t episode_seed(std::uint64_t seed, int episode, int env) {
  return world::splitmix64(world::splitmix64(seed) ^ (static_cast<std::uint64_t>(episode) << 20) ^
                           static_cast<std::uint64_t>(env));
}

}  // namespace

Trainer::Trainer(ExperimentConfig config)
    : config_((config.validate(), std::move(config))),
      train_world_(config_.world_config(config_.num_players_train)),
      value_(value_spec(config_, train_world_)),
      agent_(agent_spec(config_, train_world_)),
      value_opt_(nn::OptimizerKind::AdamLike),
      agent_opt_(nn::OptimizerKind::AdamLike),
      rng_(config_.seed) {
  value_.init(online_, rng_);
  agent_.init(agent_params_, rng_);
  target_ = online_;
}

LossContext Trainer::loss_context() const {
  return LossContext{&value_, &agent_, &agent_params_, &target_, nullptr, config_.gamma, config_.topology,
                     config_.lambda};
}

double Trainer::epsilon() const {
  const double horizon = config_.eps_fraction * static_cast<double>(config_.max_num_steps);
  const double frac = std::min(1.0, static_cast<double>(steps_) / horizon);
  return config_.eps_start + frac * (config_.eps_end - config_.eps_start);
}

void Trainer::update(std::span<const TransitionRecord> window, EpisodeMetrics& acc, int& updates) {
  const LossContext ctx = loss_context();
  const LossReport report = value_losses(ctx, online_, window, true);
  if (!std::isfinite(report.total) || !online_.grads_finite()) {
    std::ostringstream msg;
    msg << "non-finite value loss at episode " << episode_ << ", step " << steps_ << ": td=" << report.td
        << " reg=" << report.reg << " total=" << report.total << " batch=" << window.size();
    throw NumericError(msg.str());
  }
  if (!first_update_) first_update_ = report;
  value_opt_.step(online_, config_.lr);

  const auto samples = agent_samples(window);
  const auto agent_report = agent::agent_model_loss(agent_, agent_params_, samples, config_.weight_predict, true);
  if (!std::isfinite(agent_report.loss)) {
    std::ostringstream msg;
    msg << "non-finite agent-model loss at episode " << episode_ << ", step " << steps_;
    throw NumericError(msg.str());
  }
  agent_opt_.step(agent_params_, config_.lr);
  nn::soft_update(target_, online_, config_.tau);

  acc.td_loss += report.td;
  acc.reg_loss += report.reg;
  acc.agent_nll += agent_report.nll_per_prediction;
  ++updates;
}

EpisodeMetrics Trainer::train_episode() {
  const int n_envs = config_.num_envs;
  const double lower_bound = train_world_.reward_lower_bound();
  std::vector<world::OpenWorld> envs(static_cast<std::size_t>(n_envs), world::OpenWorld(train_world_));
  std::vector<agent::EmbeddingTable> value_h(n_envs), agent_h(n_envs);
  std::vector<double> returns(n_envs, 0.0);
  for (int e = 0; e < n_envs; ++e) envs[e].reset(episode_seed(config_.seed, episode_, e));

  std::vector<TransitionRecord> buffer;
  buffer.reserve(static_cast<std::size_t>(n_envs * config_.eps_length));
  EpisodeMetrics metrics;
  metrics.episode = episode_ + 1;
  metrics.epsilon = epsilon();
  int updates = 0;

  for (int t = 0; t < config_.eps_length; ++t) {
    const double eps = epsilon();
    for (int e = 0; e < n_envs; ++e) {
      const auto& snap = envs[e].snapshot();
      TransitionRecord rec;
      rec.obs = snap.obs;
      rec.graph = graph::build(config_.topology, kLearnerId, snap.obs.ids);
      rec.value_prev = std::move(value_h[e]);
      rec.agent_prev = std::move(agent_h[e]);
      const auto u = value_.forward(online_, rec.value_prev, rec.obs, rec.graph, &rec.value_next_prev);
      const auto policies = agent_.forward(agent_params_, rec.agent_prev, rec.obs, rec.graph, &rec.agent_next_prev);
      const auto values = value::learner_action_values(u, rec.graph, policies);
      const int action = act(values, eps, rng_);

      auto out = envs[e].step(action);
      rec.actions = out.teammate_actions;
      rec.actions[kLearnerId] = action;
      rec.reward = shift_reward(out.reward, lower_bound);
      returns[e] += rec.reward;
      rec.next_obs = std::move(out.next.obs);
      rec.next_graph = graph::build(config_.topology, kLearnerId, rec.next_obs.ids);
      rec.done = out.done;
      rec.joined = std::move(out.joined);
      rec.left = std::move(out.left);
      value_h[e] = rec.value_next_prev;
      agent_h[e] = rec.agent_next_prev;
      buffer.push_back(std::move(rec));
    }
    ++steps_;
    if (steps_ % config_.update_frequency == 0) {
      const std::size_t window = static_cast<std::size_t>(n_envs * config_.update_frequency);
      const std::size_t take = std::min(window, buffer.size());
      update(std::span<const TransitionRecord>(buffer).last(take), metrics, updates);
    }
  }
  buffer.clear();

  ++episode_;
  metrics.steps = steps_;
  double total = 0.0;
  for (double r : returns) total += r;
  metrics.mean_return = total / n_envs;
  if (updates > 0) {
    metrics.td_loss /= updates;
    metrics.reg_loss /= updates;
    metrics.agent_nll /= updates;
  }
  return metrics;
}

double Trainer::evaluate(int max_agents, int episodes, EvalPolicy policy) const {
  const auto world_cfg = config_.world_config(max_agents);
  const double lower_bound = world_cfg.reward_lower_bound();
  double total = 0.0;
  for (int k = 0; k < episodes; ++k) {
    const std::uint64_t seed = config_.eval_init_seed + static_cast<std::uint64_t>(k);
    world::OpenWorld env(world_cfg);
    env.reset(seed);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, env.num_actions() - 1);
    agent::EmbeddingTable value_h, agent_h;
    while (true) {
      int action;
      if (policy == EvalPolicy::UniformRandom) {
        action = pick(rng);
      } else {
        const auto& snap = env.snapshot();
        const auto g = graph::build(config_.topology, kLearnerId, snap.obs.ids);
        agent::EmbeddingTable vnext, anext;
        const auto u = value_.forward(online_, value_h, snap.obs, g, &vnext);
        const auto policies = agent_.forward(agent_params_, agent_h, snap.obs, g, &anext);
        const auto values = value::learner_action_values(u, g, policies);
        action = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
        value_h = std::move(vnext);
        agent_h = std::move(anext);
      }
      const auto out = env.step(action);
      total += shift_reward(out.reward, lower_bound);
      if (out.done) break;
    }
  }
  return total / episodes;
}

nn::ParameterStore Trainer::checkpoint() const {
  nn::ParameterStore bundle;
  bundle.merge(online_, "online/");
  bundle.merge(target_, "target/");
  bundle.merge(agent_params_, "agent/");
  return bundle;
}

void Trainer::load_checkpoint(const nn::ParameterStore& bundle) {
  auto online = bundle.extract("online/");
  auto target = bundle.extract("target/");
  auto agent = bundle.extract("agent/");
  if (!online.same_layout(online_) || !target.same_layout(target_) || !agent.same_layout(agent_params_)) {
    throw DomainError("checkpoint layout does not match the configured networks");
  }
  online_ = std::move(online);
  target_ = std::move(target);
  agent_params_ = std::move(agent);
}

}  // namespace oaht::train
