#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "oaht/graph/dynamic_graph.hpp"

namespace oaht::tabular {

inline constexpr int kMaxTabularAgents = 3;
inline constexpr std::size_t kMaxStates = 64;
inline constexpr std::size_t kMaxJointActions = 27;

// Observable state: world state and the active membership bitmask (bit 0 is
// the learner, always set).
struct TabState {
  int world = 0;
  std::uint32_t members = 1;
  bool has(int agent) const { return (members >> agent) & 1u; }
  auto operator<=>(const TabState&) const = default;
};

using QTable = std::vector<std::vector<double>>;  // [state][joint action]
using Policy = std::vector<std::vector<double>>;  // [state][learner action]

// Miniature open-team game with explicit factorized rewards. Agents absent
// from a state take the single placeholder action 0; joint actions are mixed
// radix over agents in id order. Teammate types are drawn from
// the per-state type distribution at every step and are not observed by the learner.
class TabularGame {
 public:
  struct Spec {
    int num_world_states = 2;
    int num_agents = 3;             // learner + teammates, <= 3
    std::vector<int> num_actions;   // per agent, each in [1, 3]
    int num_types = 2;
    graph::Topology topology = graph::Topology::Complete;
    double gamma = 0.9;
  };

  explicit TabularGame(Spec spec);

  const Spec& spec() const { return spec_; }
  double gamma() const { return spec_.gamma; }
  std::size_t num_states() const { return states_.size(); }
  const TabState& state(std::size_t s) const { return states_[s]; }
  std::size_t state_index(TabState st) const;
  int num_joint(std::size_t s) const { return joint_count_[s]; }
  int num_learner_actions() const { return spec_.num_actions[0]; }
  std::vector<int> decode(std::size_t s, int joint) const;  // -1 for absent agents
  int encode(std::size_t s, const std::vector<int>& actions) const;
  int learner_action(std::size_t s, int joint) const { return decode(s, joint)[0]; }

  // Ordered edges (j, k) among the members of state s under the topology.
  std::vector<std::pair<int, int>> edges(std::size_t s) const;

  // Components; setters validate shapes and non-negativity.
  void set_type_distribution(std::size_t s, std::vector<double> p);  // over num_types^(num_agents-1)
  void set_teammate_policy(int type, int agent, std::size_t s, std::vector<double> p);
  void set_alpha(int j, int k, std::size_t s, std::vector<double> table);  // row-major A_j x A_k
  void set_indiv(int j, std::size_t s, std::vector<double> r);
  void set_transition(std::size_t s, int joint, std::vector<double> p);

  double alpha(int j, int k, std::size_t s, int a, int b) const;
  double indiv(int j, std::size_t s, int a) const;
  const std::vector<double>& transition(std::size_t s, int joint) const { return transition_[s][joint]; }

  // R(s, a) = sum over ordered edges of alpha + sum over members of R_j.
  double reward(std::size_t s, int joint) const;
  // R_j(a | s) = sum_{(j,k) in E} alpha_jk + R_j(a^j | s).
  double preference_reward(int j, std::size_t s, int joint) const;
  // Probability of the teammates' part of `joint` at s, marginalized over types.
  double teammate_prob(std::size_t s, int joint) const;

  // Checks kernel rows, type distributions, policies, alpha symmetry, and that
  // membership never grows.
  void validate() const;

 private:
  Spec spec_;
  std::vector<TabState> states_;
  std::vector<int> joint_count_;
  std::vector<std::vector<double>> type_dist_;  // [state][type combo]
  // [type][agent][state] -> action distribution
  std::vector<std::vector<std::vector<std::vector<double>>>> policy_;
  std::map<std::pair<int, int>, std::vector<std::vector<double>>> alpha_;  // [(j,k)][state]
  std::vector<std::vector<std::vector<double>>> indiv_;                   // [j][state]
  std::vector<std::vector<std::vector<double>>> transition_;              // [state][joint]
  mutable std::vector<std::vector<double>> teammate_prob_cache_;
};

struct RandomTabularOptions {
  int num_world_states = 2;
  int num_agents = 3;
  int max_actions = 3;
  int num_types = 2;
  graph::Topology topology = graph::Topology::Complete;
  double gamma = 0.9;
  double reward_hi = 0.5;  // alpha and R_j drawn from [0, reward_hi]
  double stay_lo = 0.6;    // per-step probability that a teammate stays
  bool zero_alpha = false;
};

// Random game with non-negative symmetric alpha and non-negative R_j
// (a game of the alpha/beta decomposition family).
TabularGame random_tabular_game(std::mt19937_64& rng, const RandomTabularOptions& options);

Policy deterministic_policy(const TabularGame& game, const std::vector<int>& choice);
Policy uniform_policy(const TabularGame& game);

}  // namespace oaht::tabular
