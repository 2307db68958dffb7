#include "oaht/tabular/tabular_game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oaht/errors.hpp"

namespace oaht::tabular {

namespace {

constexpr double kSumTol = 1e-12;

int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_distribution(const std::vector<double>& p, std::size_t n, const char* what) {
  if (p.size() != n) throw DomainError(std::string(what) + ": wrong length");
  double s = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError(std::string(what) + ": entries must be finite and >= 0");
    s += x;
  }
  if (std::abs(s - 1.0) > kSumTol) throw DomainError(std::string(what) + ": must sum to 1");
}

std::vector<double> normalized(std::vector<double> v) {
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= s;
  return v;
}

}  // namespace

TabularGame::TabularGame(Spec spec) : spec_(std::move(spec)) {
  if (spec_.num_agents < 1 || spec_.num_agents > kMaxTabularAgents) throw CapacityError("tabular game: 1..3 agents");
  if (static_cast<int>(spec_.num_actions.size()) != spec_.num_agents) {
    throw DomainError("tabular game: one action count per agent");
  }
  for (int a : spec_.num_actions) {
    if (a < 1 || a > 3) throw CapacityError("tabular game: action counts must lie in [1, 3]");
  }
  if (spec_.num_world_states < 1) throw DomainError("tabular game: need a world state");
  if (spec_.num_types < 1) throw DomainError("tabular game: need a teammate type");
  if (!(spec_.gamma > 0.0 && spec_.gamma < 1.0)) throw DomainError("tabular game: gamma must lie in (0, 1)");
  const std::uint32_t masks = 1u << spec_.num_agents;
  if (static_cast<std::size_t>(spec_.num_world_states) * (masks / 2) > kMaxStates) {
    throw CapacityError("tabular game: too many states");
  }
  for (int w = 0; w < spec_.num_world_states; ++w) {
    for (std::uint32_t m = 1; m < masks; m += 2) states_.push_back({w, m});
  }
  const std::size_t S = states_.size();
  const int combos = ipow(spec_.num_types, spec_.num_agents - 1);
  joint_count_.resize(S);
  for (std::size_t s = 0; s < S; ++s) {
    int n = 1;
    for (int j = 0; j < spec_.num_agents; ++j) {
      if (states_[s].has(j)) n *= spec_.num_actions[j];
    }
    joint_count_[s] = n;
  }
  type_dist_.assign(S, std::vector<double>(combos, 1.0 / combos));
  policy_.assign(spec_.num_types, std::vector<std::vector<std::vector<double>>>(spec_.num_agents));
  for (auto& by_agent : policy_) {
    for (int j = 0; j < spec_.num_agents; ++j) {
      by_agent[j].assign(S, std::vector<double>(spec_.num_actions[j], 1.0 / spec_.num_actions[j]));
    }
  }
  for (int j = 0; j < spec_.num_agents; ++j) {
    for (int k = 0; k < spec_.num_agents; ++k) {
      if (j == k) continue;
      alpha_[{j, k}].assign(S, std::vector<double>(spec_.num_actions[j] * spec_.num_actions[k], 0.0));
    }
  }
  indiv_.resize(spec_.num_agents);
  for (int j = 0; j < spec_.num_agents; ++j) indiv_[j].assign(S, std::vector<double>(spec_.num_actions[j], 0.0));
  transition_.resize(S);
  for (std::size_t s = 0; s < S; ++s) {
    transition_[s].assign(joint_count_[s], std::vector<double>(S, 0.0));
    for (auto& row : transition_[s]) row[s] = 1.0;
  }
}

std::size_t TabularGame::state_index(TabState st) const {
  const auto it = std::find(states_.begin(), states_.end(), st);
  if (it == states_.end()) throw DomainError("tabular game: unknown state");
  return static_cast<std::size_t>(it - states_.begin());
}

std::vector<int> TabularGame::decode(std::size_t s, int joint) const {
  if (s >= states_.size() || joint < 0 || joint >= joint_count_[s]) throw DomainError("tabular game: bad joint index");
  std::vector<int> out(spec_.num_agents, -1);
  for (int j = spec_.num_agents - 1; j >= 0; --j) {
    if (!states_[s].has(j)) continue;
    out[j] = joint % spec_.num_actions[j];
    joint /= spec_.num_actions[j];
  }
  return out;
}

int TabularGame::encode(std::size_t s, const std::vector<int>& actions) const {
  if (static_cast<int>(actions.size()) != spec_.num_agents) throw DomainError("tabular game: bad action vector");
  int idx = 0;
  for (int j = 0; j < spec_.num_agents; ++j) {
    if (!states_[s].has(j)) continue;
    if (actions[j] < 0 || actions[j] >= spec_.num_actions[j]) throw DomainError("tabular game: action out of range");
    idx = idx * spec_.num_actions[j] + actions[j];
  }
  return idx;
}

std::vector<std::pair<int, int>> TabularGame::edges(std::size_t s) const {
  std::vector<std::pair<int, int>> out;
  const TabState& st = states_.at(s);
  for (int j = 0; j < spec_.num_agents; ++j) {
    for (int k = 0; k < spec_.num_agents; ++k) {
      if (j == k || !st.has(j) || !st.has(k)) continue;
      if (spec_.topology == graph::Topology::Star && j != 0 && k != 0) continue;
      out.emplace_back(j, k);
    }
  }
  return out;
}

void TabularGame::set_type_distribution(std::size_t s, std::vector<double> p) {
  check_distribution(p, type_dist_.at(s).size(), "type distribution");
  type_dist_[s] = std::move(p);
  teammate_prob_cache_.clear();
}

void TabularGame::set_teammate_policy(int type, int agent, std::size_t s, std::vector<double> p) {
  if (agent < 1 || agent >= spec_.num_agents || type < 0 || type >= spec_.num_types) {
    throw DomainError("teammate policy: bad type or agent");
  }
  check_distribution(p, static_cast<std::size_t>(spec_.num_actions[agent]), "teammate policy");
  policy_[type][agent].at(s) = std::move(p);
  teammate_prob_cache_.clear();
}

void TabularGame::set_alpha(int j, int k, std::size_t s, std::vector<double> table) {
  auto it = alpha_.find({j, k});
  if (it == alpha_.end()) throw DomainError("alpha: bad agent pair");
  if (table.size() != it->second.at(s).size()) throw DomainError("alpha: wrong table size");
  for (double x : table) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError("alpha: entries must be finite and >= 0");
  }
  it->second[s] = std::move(table);
}

void TabularGame::set_indiv(int j, std::size_t s, std::vector<double> r) {
  if (j < 0 || j >= spec_.num_agents) throw DomainError("indiv: bad agent");
  if (r.size() != indiv_[j].at(s).size()) throw DomainError("indiv: wrong length");
  for (double x : r) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError("indiv: entries must be finite and >= 0");
  }
  indiv_[j][s] = std::move(r);
}

void TabularGame::set_transition(std::size_t s, int joint, std::vector<double> p) {
  check_distribution(p, states_.size(), "transition");
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (p[t] > 0.0 && (states_[t].members & ~states_.at(s).members) != 0u) {
      throw DomainError("transition: membership may only shrink");
    }
  }
  transition_.at(s).at(joint) = std::move(p);
}

double TabularGame::alpha(int j, int k, std::size_t s, int a, int b) const {
  return alpha_.at({j, k}).at(s).at(static_cast<std::size_t>(a * spec_.num_actions[k] + b));
}

double TabularGame::indiv(int j, std::size_t s, int a) const { return indiv_.at(j).at(s).at(a); }

double TabularGame::reward(std::size_t s, int joint) const {
  const auto a = decode(s, joint);
  double r = 0.0;
  for (const auto& [j, k] : edges(s)) r += alpha(j, k, s, a[j], a[k]);
  for (int j = 0; j < spec_.num_agents; ++j) {
    if (a[j] >= 0) r += indiv(j, s, a[j]);
  }
  return r;
}

double TabularGame::preference_reward(int j, std::size_t s, int joint) const {
  const auto a = decode(s, joint);
  if (a.at(j) < 0) throw DomainError("preference reward: agent absent");
  double r = indiv(j, s, a[j]);
  for (const auto& [from, to] : edges(s)) {
    if (from == j) r += alpha(from, to, s, a[from], a[to]);
  }
  return r;
}

double TabularGame::teammate_prob(std::size_t s, int joint) const {
  if (teammate_prob_cache_.empty()) {
    teammate_prob_cache_.resize(states_.size());
    const int n_tm = spec_.num_agents - 1;
    for (std::size_t st = 0; st < states_.size(); ++st) {
      auto& row = teammate_prob_cache_[st];
      row.assign(joint_count_[st], 0.0);
      for (int q = 0; q < joint_count_[st]; ++q) {
        const auto a = decode(st, q);
        double total = 0.0;
        for (std::size_t combo = 0; combo < type_dist_[st].size(); ++combo) {
          double p = type_dist_[st][combo];
          std::size_t c = combo;
          for (int j = 1; j <= n_tm; ++j) {
            const int type = static_cast<int>(c % spec_.num_types);
            c /= spec_.num_types;
            if (a[j] >= 0) p *= policy_[type][j][st][a[j]];
          }
          total += p;
        }
        row[q] = total;
      }
    }
  }
  return teammate_prob_cache_.at(s).at(joint);
}

void TabularGame::validate() const {
  for (std::size_t s = 0; s < states_.size(); ++s) {
    check_distribution(type_dist_[s], type_dist_[s].size(), "type distribution");
    for (int q = 0; q < joint_count_[s]; ++q) {
      const auto& p = transition_[s][q];
      check_distribution(p, states_.size(), "transition");
      for (std::size_t t = 0; t < p.size(); ++t) {
        if (p[t] > 0.0 && (states_[t].members & ~states_[s].members) != 0u) {
          throw DomainError("transition: membership may only shrink");
        }
      }
    }
    for (int j = 0; j < spec_.num_agents; ++j) {
      for (int k = j + 1; k < spec_.num_agents; ++k) {
        for (int a = 0; a < spec_.num_actions[j]; ++a) {
          for (int b = 0; b < spec_.num_actions[k]; ++b) {
            if (alpha(j, k, s, a, b) != alpha(k, j, s, b, a)) throw DomainError("alpha must be symmetric");
          }
        }
      }
    }
  }
}

TabularGame random_tabular_game(std::mt19937_64& rng, const RandomTabularOptions& o) {
  std::uniform_int_distribution<int> n_act(1, o.max_actions);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TabularGame::Spec spec;
  spec.num_world_states = o.num_world_states;
  spec.num_agents = o.num_agents;
  spec.num_types = o.num_types;
  spec.topology = o.topology;
  spec.gamma = o.gamma;
  for (int j = 0; j < o.num_agents; ++j) spec.num_actions.push_back(j == 0 ? std::max(2, n_act(rng)) : n_act(rng));
  if (spec.num_actions[0] > o.max_actions) spec.num_actions[0] = o.max_actions;
  TabularGame game(spec);
  const std::size_t S = game.num_states();
  const int combos = ipow(o.num_types, o.num_agents - 1);
  auto random_dist = [&](std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = 0.05 + unit(rng);
    return normalized(std::move(v));
  };
  for (std::size_t s = 0; s < S; ++s) {
    game.set_type_distribution(s, random_dist(static_cast<std::size_t>(combos)));
    for (int type = 0; type < o.num_types; ++type) {
      for (int j = 1; j < o.num_agents; ++j) game.set_teammate_policy(type, j, s, random_dist(spec.num_actions[j]));
    }
    for (int j = 0; j < o.num_agents; ++j) {
      std::vector<double> r(spec.num_actions[j]);
      for (double& x : r) x = o.reward_hi * unit(rng);
      game.set_indiv(j, s, std::move(r));
      for (int k = j + 1; k < o.num_agents; ++k) {
        const int aj = spec.num_actions[j], ak = spec.num_actions[k];
        std::vector<double> t(static_cast<std::size_t>(aj * ak), 0.0), tt(t.size(), 0.0);
        for (int a = 0; a < aj; ++a) {
          for (int b = 0; b < ak; ++b) {
            const double v = o.zero_alpha ? 0.0 : o.reward_hi * unit(rng);
            t[a * ak + b] = v;
            tt[b * aj + a] = v;
          }
        }
        game.set_alpha(j, k, s, std::move(t));
        game.set_alpha(k, j, s, std::move(tt));
      }
    }
    const TabState cur = game.state(s);
    for (int q = 0; q < game.num_joint(s); ++q) {
      const auto world = random_dist(static_cast<std::size_t>(o.num_world_states));
      std::vector<double> stay(o.num_agents, 1.0);
      for (int j = 1; j < o.num_agents; ++j) stay[j] = o.stay_lo + (1.0 - o.stay_lo) * unit(rng);
      std::vector<double> p(S, 0.0);
      for (std::size_t t = 0; t < S; ++t) {
        const TabState nxt = game.state(t);
        if ((nxt.members & ~cur.members) != 0u) continue;
        double pm = 1.0;
        for (int j = 1; j < o.num_agents; ++j) {
          if (!cur.has(j)) continue;
          pm *= nxt.has(j) ? stay[j] : 1.0 - stay[j];
        }
        p[t] = world[nxt.world] * pm;
      }
      game.set_transition(s, q, normalized(std::move(p)));
    }
  }
  game.validate();
  return game;
}

Policy deterministic_policy(const TabularGame& game, const std::vector<int>& choice) {
  if (choice.size() != game.num_states()) throw DomainError("deterministic policy: one choice per state");
  Policy pi(game.num_states(), std::vector<double>(game.num_learner_actions(), 0.0));
  for (std::size_t s = 0; s < pi.size(); ++s) pi[s].at(choice[s]) = 1.0;
  return pi;
}

Policy uniform_policy(const TabularGame& game) {
  const int A = game.num_learner_actions();
  return Policy(game.num_states(), std::vector<double>(A, 1.0 / A));
}

}  // namespace oaht::tabular
