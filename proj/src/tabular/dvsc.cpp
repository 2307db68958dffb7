#include "oaht/tabular/dvsc.hpp"

#include <algorithm>
#include <limits>

#include "oaht/errors.hpp"
#include "oaht/tabular/bellman.hpp"

namespace oaht::tabular {

namespace {

bool precondition(const TabularGame& game) {
  const int n = game.spec().num_agents;
  for (std::size_t s = 0; s < game.num_states(); ++s) {
    std::vector<double> singleton(n, 0.0);
    for (int j = 0; j < n; ++j) {
      if (!game.state(s).has(j)) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < game.spec().num_actions[j]; ++a) best = std::max(best, game.indiv(j, s, a));
      singleton[j] = best;
    }
    bool found = false;
    for (int q = 0; q < game.num_joint(s) && !found; ++q) {
      bool ok = true;
      for (int j = 0; j < n && ok; ++j) {
        if (game.state(s).has(j)) ok = game.preference_reward(j, s, q) >= singleton[j];
      }
      found = ok;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

DvscReport dvsc_check(const TabularGame& game, double tol) {
  const std::size_t S = game.num_states();
  const int A = game.num_learner_actions();
  std::size_t count = 1;
  for (std::size_t s = 0; s < S; ++s) {
    count *= static_cast<std::size_t>(A);
    if (count > kMaxDvscPolicies) throw CapacityError("dvsc_check: too many deterministic policies");
  }
  const RewardFn reward = [&](std::size_t s, int a) { return game.reward(s, a); };
  std::vector<std::vector<double>> values;
  std::vector<std::vector<int>> choices;
  values.reserve(count);
  std::vector<int> choice(S, 0);
  for (std::size_t p = 0; p < count; ++p) {
    std::size_t code = p;
    for (std::size_t s = 0; s < S; ++s) {
      choice[s] = static_cast<int>(code % A);
      code /= A;
    }
    const Policy pi = deterministic_policy(game, choice);
    values.push_back(policy_values(game, evaluate_policy(game, pi, reward), pi));
    choices.push_back(choice);
  }

  DvscReport report;
  report.num_policies = count;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t p = 0; p < count; ++p) {
    double total = 0.0;
    for (double v : values[p]) total += v;
    if (total > best) {
      best = total;
      best_idx = p;
    }
  }
  report.best_policy = choices[best_idx];
  report.best_values = values[best_idx];
  report.best_welfare = best / static_cast<double>(S);
  report.worst_gap = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < count; ++p) {
    for (std::size_t s = 0; s < S; ++s) {
      report.worst_gap = std::min(report.worst_gap, report.best_values[s] - values[p][s]);
    }
  }
  double scale = 1.0;
  for (double v : report.best_values) scale = std::max(scale, std::abs(v));
  report.dominant = report.worst_gap >= -tol * scale;
  report.precondition_holds = precondition(game);
  return report;
}

}  // namespace oaht::tabular
