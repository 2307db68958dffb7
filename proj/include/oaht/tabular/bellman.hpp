#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "oaht/tabular/tabular_game.hpp"

namespace oaht::tabular {

QTable zero_q(const TabularGame& game);

// V(s) = max_{a_i} sum_{a_-i} p(a_-i | s) Q(s, a_i, a_-i).
std::vector<double> greedy_values(const TabularGame& game, const QTable& q);
// V(s) = sum_a pi(a_i | s) p(a_-i | s) Q(s, a).
std::vector<double> policy_values(const TabularGame& game, const QTable& q, const Policy& pi);

// (T Q)(s, a) = R(s, a) + gamma * sum_s' P(s' | s, a) V_Q(s'), with V_Q the
// greedy or policy value of Q.
QTable bellman_backup(const TabularGame& game, const QTable& q);
QTable bellman_backup(const TabularGame& game, const QTable& q, const Policy& pi);

double sup_distance(const QTable& a, const QTable& b);

struct ValueIterationResult {
  QTable q;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> ratios;  // ||Q_{n+1} - Q_n|| / ||Q_n - Q_{n-1}|| while measurable
};

ValueIterationResult value_iteration(const TabularGame& game, double tol = 1e-12, int max_iterations = 100000);

// Exact evaluation of pi for the reward component `reward(s, joint)`.
using RewardFn = std::function<double(std::size_t, int)>;
QTable evaluate_policy(const TabularGame& game, const Policy& pi, const RewardFn& reward, double tol = 1e-14);

struct FactorizedQ {
  QTable full;
  std::map<std::pair<int, int>, QTable> pairwise;  // ordered edge (j, k)
  std::vector<QTable> individual;                  // per agent
  double identity_error = 0.0;  // sup |full - sum of components|
};

// Q^pi split into discounted returns of each alpha_jk and each R_j(a^j).
FactorizedQ exact_factorized_q(const TabularGame& game, const Policy& pi);

}  // namespace oaht::tabular
