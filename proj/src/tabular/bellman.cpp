#include "oaht/tabular/bellman.hpp"

#include <algorithm>
#include <cmath>

#include "oaht/errors.hpp"

namespace oaht::tabular {

namespace {

void check_shape(const TabularGame& game, const QTable& q) {
  if (q.size() != game.num_states()) throw DomainError("Q table: wrong state count");
  for (std::size_t s = 0; s < q.size(); ++s) {
    if (static_cast<int>(q[s].size()) != game.num_joint(s)) throw DomainError("Q table: wrong joint-action count");
  }
}

void check_policy(const TabularGame& game, const Policy& pi) {
  if (pi.size() != game.num_states()) throw DomainError("policy: wrong state count");
  for (const auto& row : pi) {
    if (static_cast<int>(row.size()) != game.num_learner_actions()) throw DomainError("policy: wrong action count");
  }
}

QTable backup_with(const TabularGame& game, const std::vector<double>& v) {
  QTable out = zero_q(game);
  for (std::size_t s = 0; s < out.size(); ++s) {
    for (int a = 0; a < game.num_joint(s); ++a) {
      const auto& p = game.transition(s, a);
      double ev = 0.0;
      for (std::size_t t = 0; t < p.size(); ++t) ev += p[t] * v[t];
      out[s][a] = game.reward(s, a) + game.gamma() * ev;
    }
  }
  return out;
}

double sup_abs(const QTable& q) {
  double m = 0.0;
  for (const auto& row : q) {
    for (double x : row) m = std::max(m, std::abs(x));
  }
  return m;
}

}  // namespace

QTable zero_q(const TabularGame& game) {
  QTable q(game.num_states());
  for (std::size_t s = 0; s < q.size(); ++s) q[s].assign(game.num_joint(s), 0.0);
  return q;
}

std::vector<double> greedy_values(const TabularGame& game, const QTable& q) {
  check_shape(game, q);
  std::vector<double> v(game.num_states());
  for (std::size_t s = 0; s < v.size(); ++s) {
    std::vector<double> by_action(game.num_learner_actions(), 0.0);
    for (int a = 0; a < game.num_joint(s); ++a) by_action[game.learner_action(s, a)] += game.teammate_prob(s, a) * q[s][a];
    v[s] = *std::max_element(by_action.begin(), by_action.end());
  }
  return v;
}

std::vector<double> policy_values(const TabularGame& game, const QTable& q, const Policy& pi) {
  check_shape(game, q);
  check_policy(game, pi);
  std::vector<double> v(game.num_states(), 0.0);
  for (std::size_t s = 0; s < v.size(); ++s) {
    for (int a = 0; a < game.num_joint(s); ++a) {
      v[s] += pi[s][game.learner_action(s, a)] * game.teammate_prob(s, a) * q[s][a];
    }
  }
  return v;
}

QTable bellman_backup(const TabularGame& game, const QTable& q) { return backup_with(game, greedy_values(game, q)); }

QTable bellman_backup(const TabularGame& game, const QTable& q, const Policy& pi) {
  return backup_with(game, policy_values(game, q, pi));
}

double sup_distance(const QTable& a, const QTable& b) {
  if (a.size() != b.size()) throw DomainError("sup distance: shape mismatch");
  double m = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (a[s].size() != b[s].size()) throw DomainError("sup distance: shape mismatch");
    for (std::size_t i = 0; i < a[s].size(); ++i) m = std::max(m, std::abs(a[s][i] - b[s][i]));
  }
  return m;
}

ValueIterationResult value_iteration(const TabularGame& game, double tol, int max_iterations) {
  ValueIterationResult out;
  out.q = zero_q(game);
  double prev_diff = -1.0;
  for (int it = 1; it <= max_iterations; ++it) {
    QTable next = bellman_backup(game, out.q);
    const double diff = sup_distance(next, out.q);
    const double scale = 1.0 + sup_abs(next);
    if (prev_diff >= 1e-5 * scale) out.ratios.push_back(diff / prev_diff);
    out.q = std::move(next);
    out.iterations = it;
    out.residual = diff;
    if (diff <= tol * scale) return out;
    prev_diff = diff;
  }
  throw NumericError("value iteration did not converge");
}

QTable evaluate_policy(const TabularGame& game, const Policy& pi, const RewardFn& reward, double tol) {
  check_policy(game, pi);
  const std::size_t S = game.num_states();
  std::vector<double> r_pi(S, 0.0);
  std::vector<std::vector<double>> p_pi(S, std::vector<double>(S, 0.0));
  for (std::size_t s = 0; s < S; ++s) {
    for (int a = 0; a < game.num_joint(s); ++a) {
      const double w = pi[s][game.learner_action(s, a)] * game.teammate_prob(s, a);
      if (w == 0.0) continue;
      r_pi[s] += w * reward(s, a);
      const auto& p = game.transition(s, a);
      for (std::size_t t = 0; t < S; ++t) p_pi[s][t] += w * p[t];
    }
  }
  std::vector<double> v(S, 0.0), next(S);
  for (int it = 0; it < 1000000; ++it) {
    double diff = 0.0, scale = 1.0;
    for (std::size_t s = 0; s < S; ++s) {
      double ev = 0.0;
      for (std::size_t t = 0; t < S; ++t) ev += p_pi[s][t] * v[t];
      next[s] = r_pi[s] + game.gamma() * ev;
      diff = std::max(diff, std::abs(next[s] - v[s]));
      scale = std::max(scale, 1.0 + std::abs(next[s]));
    }
    v.swap(next);
    if (diff <= tol * scale) {
      QTable q = zero_q(game);
      for (std::size_t s = 0; s < S; ++s) {
        for (int a = 0; a < game.num_joint(s); ++a) {
          const auto& p = game.transition(s, a);
          double ev = 0.0;
          for (std::size_t t = 0; t < S; ++t) ev += p[t] * v[t];
          q[s][a] = reward(s, a) + game.gamma() * ev;
        }
      }
      return q;
    }
  }
  throw NumericError("policy evaluation did not converge");
}

FactorizedQ exact_factorized_q(const TabularGame& game, const Policy& pi) {
  FactorizedQ out;
  out.full = evaluate_policy(game, pi, [&](std::size_t s, int a) { return game.reward(s, a); });
  const int n = game.spec().num_agents;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      if (game.spec().topology == graph::Topology::Star && j != 0 && k != 0) continue;
      out.pairwise[{j, k}] = evaluate_policy(game, pi, [&, j, k](std::size_t s, int a) {
        if (!game.state(s).has(j) || !game.state(s).has(k)) return 0.0;
        const auto acts = game.decode(s, a);
        return game.alpha(j, k, s, acts[j], acts[k]);
      });
    }
  }
  for (int j = 0; j < n; ++j) {
    out.individual.push_back(evaluate_policy(game, pi, [&, j](std::size_t s, int a) {
      if (!game.state(s).has(j)) return 0.0;
      return game.indiv(j, s, game.decode(s, a)[j]);
    }));
  }
  QTable sum = zero_q(game);
  for (const auto& [edge, q] : out.pairwise) {
    for (std::size_t s = 0; s < q.size(); ++s) {
      for (std::size_t a = 0; a < q[s].size(); ++a) sum[s][a] += q[s][a];
    }
  }
  for (const auto& q : out.individual) {
    for (std::size_t s = 0; s < q.size(); ++s) {
      for (std::size_t a = 0; a < q[s].size(); ++a) sum[s][a] += q[s][a];
    }
  }
  out.identity_error = sup_distance(out.full, sum);
  return out;
}

}  // namespace oaht::tabular
