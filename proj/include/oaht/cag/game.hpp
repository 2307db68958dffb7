#pragma once

// Static coalitional affinity games (hedonic games whose preference values are
// sums of pairwise affinity weights) and exhaustive solution-concept checks.
//
// Agents are indexed 0..n-1. Coalitions are bitmasks, so every routine here is
// limited to kMaxAgents agents; the exhaustive checks carry tighter bounds.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oaht::cag {

inline constexpr int kMaxAgents = 63;
inline constexpr int kMaxCoreAgents = 12;     // 2^n - 1 coalitions enumerated
inline constexpr int kMaxWelfareAgents = 8;   // Bell(n) partitions enumerated

using Edge = std::pair<int, int>;
using EdgeMap = std::map<Edge, double>;

// Non-empty set of agents stored as a bitmask.
class Coalition {
 public:
  explicit Coalition(std::uint64_t mask);
  Coalition(std::initializer_list<int> members);
  static Coalition from_members(const std::vector<int>& members);
  static Coalition singleton(int agent) { return Coalition(std::uint64_t{1} << agent); }

  std::uint64_t mask() const { return mask_; }
  bool contains(int agent) const { return (mask_ >> agent) & 1U; }
  int size() const;
  std::vector<int> members() const;

  friend bool operator==(const Coalition&, const Coalition&) = default;
  friend auto operator<=>(const Coalition& a, const Coalition& b) { return a.mask_ <=> b.mask_; }

 private:
  std::uint64_t mask_;
};

class AffinityGame {
 public:
  // `weights` holds w(j,k) for every edge (j,k); pairs absent from the map are
  // not edges. `preference_offsets` is subtracted from every non-singleton
  // preference value (all zero unless produced by translate_preferences).
  AffinityGame(int n_agents, EdgeMap weights, std::vector<double> singleton_values,
               std::vector<double> preference_offsets = {});

  int n_agents() const { return n_agents_; }
  const EdgeMap& weights() const { return weights_; }
  bool has_edge(int j, int k) const { return weights_.count({j, k}) > 0; }
  double weight(int j, int k) const;
  double singleton_value(int j) const { return singleton_values_[j]; }
  const std::vector<double>& singleton_values() const { return singleton_values_; }
  double preference_offset(int j) const { return preference_offsets_[j]; }
  const std::vector<double>& preference_offsets() const { return preference_offsets_; }
  // (k, w(j,k)) for every outgoing edge of j, ascending k.
  const std::vector<std::pair<int, double>>& out_edges(int j) const { return out_edges_[j]; }

  friend bool operator==(const AffinityGame&, const AffinityGame&) = default;

 private:
  int n_agents_;
  EdgeMap weights_;
  std::vector<double> singleton_values_;
  std::vector<double> preference_offsets_;
  std::vector<std::vector<std::pair<int, double>>> out_edges_;
};

// Partition of {0..n-1}; parts are kept sorted by mask.
class CoalitionStructure {
 public:
  CoalitionStructure(int n_agents, std::vector<Coalition> parts);
  static CoalitionStructure grand(int n_agents);
  static CoalitionStructure singletons(int n_agents);
  // Restricted-growth string: rgs[j] is the block index of agent j.
  static CoalitionStructure from_rgs(const std::vector<int>& rgs);

  int n_agents() const { return n_agents_; }
  const std::vector<Coalition>& parts() const { return parts_; }
  const Coalition& coalition_of(int agent) const { return parts_[owner_[agent]]; }
  bool contains_part(const Coalition& c) const;

  friend bool operator==(const CoalitionStructure& a, const CoalitionStructure& b) {
    return a.n_agents_ == b.n_agents_ && a.parts_ == b.parts_;
  }

 private:
  int n_agents_;
  std::vector<Coalition> parts_;
  std::vector<int> owner_;
};

// v_j(c): b_j when c == {j}; otherwise the sum of w(j,k) over edges into c.
double preference_value(const AffinityGame& game, int j, const Coalition& c);
double social_welfare(const AffinityGame& game, const CoalitionStructure& cs);

bool is_weakly_blocking(const AffinityGame& game, const CoalitionStructure& cs,
                        const Coalition& c);
bool is_strict_core_stable(const AffinityGame& game, const CoalitionStructure& cs);
bool is_inner_stable(const AffinityGame& game, const CoalitionStructure& cs);

// First weakly blocking coalition in bitmask order, if any.
std::optional<Coalition> find_weakly_blocking(const AffinityGame& game,
                                              const CoalitionStructure& cs);

struct WelfareOptimum {
  CoalitionStructure partition;
  double welfare;
};
// Exhaustive over restricted-growth strings in lexicographic order; the first
// maximizer wins, so ties resolve to the lexicographically smallest encoding.
WelfareOptimum max_social_welfare_partition(const AffinityGame& game);

bool is_symmetric(const AffinityGame& game);

// Sufficient condition for the grand coalition to be in the strict core:
// 0 <= z(j,k) <= w(j,k) on every edge and b_j == sum_k z(j,k) (within 1e-9).
// z must be keyed exactly on the edge set.
bool grand_coalition_core_condition(const AffinityGame& game, const EdgeMap& z);
// z(j,k) = b_j / out_degree(j); agents with b_j > 0 and no edges get no entry
// to split, so the returned map may fail the condition for them.
EdgeMap equal_split_z(const AffinityGame& game);

// Shifts every agent's preference values by -b_j: singleton values become 0 and
// b_j is carried as the agent's preference offset.
AffinityGame translate_preferences(const AffinityGame& game);

// Random games for property tests. Weights are integers in
// [weight_lo, weight_hi] scaled by 0.25 so that ties are exact.
struct RandomGameOptions {
  int n_agents = 4;
  double edge_probability = 0.7;
  int weight_lo = -4;
  int weight_hi = 4;
  bool symmetric = true;
  int singleton_hi = 0;  // b_j drawn from {0..singleton_hi} * 0.25
};
AffinityGame random_game(std::mt19937_64& rng, const RandomGameOptions& options);

// Structured-text (JSON) form:
//   {"n_agents": n,
//    "edges": [[j, k, w], ...],          // ascending (j, k)
//    "singleton_values": [b_0, ...],
//    "preference_offsets": [o_0, ...]}   // optional, defaults to zeros
// Reals are written with 17 significant digits so parse(serialize(g)) == g.
std::string serialize_game(const AffinityGame& game);
AffinityGame parse_game(const std::string& text);
AffinityGame load_game(const std::string& path);
void save_game(const std::string& path, const AffinityGame& game);

}  // namespace oaht::cag
