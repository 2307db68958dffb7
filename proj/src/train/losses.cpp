#include "oaht/train/losses.hpp"

#include <algorithm>

#include "oaht/errors.hpp"

namespace oaht::train {

double shift_reward(double raw, double env_reward_lower_bound) {
  if (raw < env_reward_lower_bound) throw DomainError("reward below the declared environment lower bound");
  return raw - env_reward_lower_bound;
}

int act(std::span<const double> values, double eps, std::mt19937_64& rng) {
  if (values.empty()) throw DomainError("act: empty value vector");
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("act: eps must lie in [0, 1]");
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < eps) return std::uniform_int_distribution<int>(0, static_cast<int>(values.size()) - 1)(rng);
  return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

double td_target(const LossContext& ctx, const TransitionRecord& rec) {
  if (rec.done) return rec.reward;
  const auto u = ctx.value->forward(*ctx.target, rec.value_next_prev, rec.next_obs, rec.next_graph);
  const auto policies = ctx.agent->forward(*ctx.agent_params, rec.agent_next_prev, rec.next_obs, rec.next_graph);
  const auto q = value::learner_action_values(u, rec.next_graph, policies);
  return rec.reward + ctx.gamma * *std::max_element(q.begin(), q.end());
}

double regularizer_term(graph::Topology topology, std::span<const double> reference, std::span<const double> online) {
  if (reference.size() != online.size() || online.empty()) throw DomainError("regularizer: operand size mismatch");
  if (topology == graph::Topology::Star) {
    double s = 0.0;
    for (std::size_t j = 1; j < reference.size(); ++j) s += reference[j];
    const double d = s - online[0];
    return 0.5 * d * d;
  }
  double total = 0.0;
  for (std::size_t j = 1; j < online.size(); ++j) {
    const double d = reference[0] - online[j];
    total += 0.5 * d * d;
  }
  return total;
}

namespace {

// d regularizer_term / d online.
std::vector<double> regularizer_grad(graph::Topology topology, std::span<const double> reference,
                                     std::span<const double> online) {
  std::vector<double> g(online.size(), 0.0);
  if (topology == graph::Topology::Star) {
    double s = 0.0;
    for (std::size_t j = 1; j < reference.size(); ++j) s += reference[j];
    g[0] = -(s - online[0]);
    return g;
  }
  for (std::size_t j = 1; j < online.size(); ++j) g[j] = -(reference[0] - online[j]);
  return g;
}

std::vector<double> indiv_at_actions(const value::Utilities& u, const graph::DynamicAffinityGraph& g,
                                     const std::map<AgentId, int>& actions) {
  std::vector<double> out(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) out[n] = u.indiv[n][actions.at(g.nodes()[n])];
  return out;
}

}  // namespace

LossReport value_losses(const LossContext& ctx, nn::ParameterStore& online, std::span<const TransitionRecord> batch,
                        bool accumulate, std::span<const double> targets) {
  LossReport report;
  if (batch.empty()) return report;
  if (!targets.empty() && targets.size() != batch.size()) throw DomainError("target count must match the batch");
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  const std::size_t A = static_cast<std::size_t>(ctx.value->spec().num_actions);
  const std::size_t KA = A * static_cast<std::size_t>(ctx.value->spec().rank);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& rec = batch[i];
    value::ValueModel::Trace trace;
    const auto u = ctx.value->forward(online, rec.value_prev, rec.obs, rec.graph, nullptr, accumulate ? &trace : nullptr);
    const double q = value::joint_q(u, rec.graph, rec.actions).total;
    const double y = targets.empty() ? td_target(ctx, rec) : targets[i];
    report.td += 0.5 * (y - q) * (y - q);

    const auto on = indiv_at_actions(u, rec.graph, rec.actions);
    std::vector<double> ref = on;
    if (ctx.reg_reference) {
      const auto ur = ctx.value->forward(*ctx.reg_reference, rec.value_prev, rec.obs, rec.graph);
      ref = indiv_at_actions(ur, rec.graph, rec.actions);
    }
    report.reg += regularizer_term(ctx.topology, ref, on);

    if (!accumulate) continue;
    const std::size_t n = rec.graph.size();
    std::vector<nn::Vec> d_indiv(n, nn::Vec(A, 0.0));
    std::vector<nn::Vec> d_factors(n, nn::Vec(KA, 0.0));
    value::joint_q_backward(u, rec.graph, rec.actions, (q - y) * inv_b, d_indiv, d_factors);
    if (ctx.lambda != 0.0) {
      const auto g = regularizer_grad(ctx.topology, ref, on);
      for (std::size_t k = 0; k < n; ++k) {
        d_indiv[k][rec.actions.at(rec.graph.nodes()[k])] += ctx.lambda * inv_b * g[k];
      }
    }
    ctx.value->backward(online, trace, d_indiv, d_factors);
  }
  report.td *= inv_b;
  report.reg *= inv_b;
  report.total = report.td + ctx.lambda * report.reg;
  return report;
}

double td_loss(const LossContext& ctx, nn::ParameterStore& online, std::span<const TransitionRecord> batch) {
  return value_losses(ctx, online, batch, false).td;
}

double regularizer(const LossContext& ctx, nn::ParameterStore& online, std::span<const TransitionRecord> batch) {
  return value_losses(ctx, online, batch, false).reg;
}

double total_loss(const LossContext& ctx, nn::ParameterStore& online, std::span<const TransitionRecord> batch) {
  return value_losses(ctx, online, batch, false).total;
}

std::vector<agent::AgentModelSample> agent_samples(std::span<const TransitionRecord> batch) {
  std::vector<agent::AgentModelSample> out;
  out.reserve(batch.size());
  for (const auto& rec : batch) {
    agent::AgentModelSample s{rec.agent_prev, rec.obs, rec.graph, {}};
    for (const auto& [id, a] : rec.actions) {
      if (id != rec.graph.learner()) s.teammate_actions.emplace(id, a);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace oaht::train
