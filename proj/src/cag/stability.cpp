#include <cmath>
#include <limits>
#include <string>

#include "oaht/cag/game.hpp"
#include "oaht/errors.hpp"

namespace oaht::cag {

namespace {

void require_core_bound(const AffinityGame& game) {
  if (game.n_agents() > kMaxCoreAgents) {
    throw CapacityError("exhaustive coalition enumeration supports at most " +
                        std::to_string(kMaxCoreAgents) + " agents, got " +
                        std::to_string(game.n_agents()));
  }
}

void require_same_agents(const AffinityGame& game, const CoalitionStructure& cs) {
  if (game.n_agents() != cs.n_agents()) throw DomainError("coalition structure does not match game size");
}

}  // namespace

double preference_value(const AffinityGame& game, int j, const Coalition& c) {
  if (j < 0 || j >= game.n_agents() || !c.contains(j)) {
    throw DomainError("agent " + std::to_string(j) + " is not a member of the coalition");
  }
  if (c.size() == 1) return game.singleton_value(j);
  double v = 0.0;
  for (const auto& [k, w] : game.out_edges(j)) {
    if (c.contains(k)) v += w;
  }
  return v - game.preference_offset(j);
}

double social_welfare(const AffinityGame& game, const CoalitionStructure& cs) {
  require_same_agents(game, cs);
  double total = 0.0;
  for (int j = 0; j < game.n_agents(); ++j) total += preference_value(game, j, cs.coalition_of(j));
  return total;
}

bool is_weakly_blocking(const AffinityGame& game, const CoalitionStructure& cs, const Coalition& c) {
  require_same_agents(game, cs);
  bool some_strict = false;
  for (int j : c.members()) {
    const double in_c = preference_value(game, j, c);
    const double current = preference_value(game, j, cs.coalition_of(j));
    if (in_c < current) return false;
    if (in_c > current) some_strict = true;
  }
  return some_strict;
}

std::optional<Coalition> find_weakly_blocking(const AffinityGame& game, const CoalitionStructure& cs) {
  require_core_bound(game);
  require_same_agents(game, cs);
  const std::uint64_t end = std::uint64_t{1} << game.n_agents();
  for (std::uint64_t m = 1; m < end; ++m) {
    Coalition c(m);
    if (is_weakly_blocking(game, cs, c)) return c;
  }
  return std::nullopt;
}

bool is_strict_core_stable(const AffinityGame& game, const CoalitionStructure& cs) {
  return !find_weakly_blocking(game, cs).has_value();
}

bool is_inner_stable(const AffinityGame& game, const CoalitionStructure& cs) {
  require_core_bound(game);
  require_same_agents(game, cs);
  for (const Coalition& part : cs.parts()) {
    const std::uint64_t full = part.mask();
    // proper non-empty submasks of the part
    for (std::uint64_t sub = (full - 1) & full; sub != 0; sub = (sub - 1) & full) {
      if (is_weakly_blocking(game, cs, Coalition(sub))) return false;
    }
  }
  return true;
}

WelfareOptimum max_social_welfare_partition(const AffinityGame& game) {
  const int n = game.n_agents();
  if (n > kMaxWelfareAgents) {
    throw CapacityError("partition enumeration supports at most " + std::to_string(kMaxWelfareAgents) +
                        " agents, got " + std::to_string(n));
  }
  // Restricted-growth strings in lexicographic order: rgs[0] = 0 and
  // rgs[j] <= 1 + max(rgs[0..j-1]).
  std::vector<int> rgs(n, 0);
  std::vector<int> prefix_max(n, 0);
  std::optional<WelfareOptimum> best;
  while (true) {
    CoalitionStructure cs = CoalitionStructure::from_rgs(rgs);
    const double w = social_welfare(game, cs);
    if (!best || w > best->welfare) best = WelfareOptimum{std::move(cs), w};

    int j = n - 1;
    while (j > 0 && rgs[j] == prefix_max[j - 1] + 1) --j;
    if (j == 0) break;
    ++rgs[j];
    prefix_max[j] = std::max(prefix_max[j - 1], rgs[j]);
    for (int k = j + 1; k < n; ++k) {
      rgs[k] = 0;
      prefix_max[k] = prefix_max[k - 1];
    }
  }
  return *best;
}

bool is_symmetric(const AffinityGame& game) {
  for (const auto& [edge, w] : game.weights()) {
    auto it = game.weights().find({edge.second, edge.first});
    if (it == game.weights().end() || it->second != w) return false;
  }
  return true;
}

bool grand_coalition_core_condition(const AffinityGame& game, const EdgeMap& z) {
  if (z.size() != game.weights().size()) throw DomainError("z must be keyed exactly on the edge set");
  for (const auto& [edge, value] : z) {
    if (!game.has_edge(edge.first, edge.second)) {
      throw DomainError("z has an entry for a non-edge (" + std::to_string(edge.first) + "," +
                        std::to_string(edge.second) + ")");
    }
  }
  std::vector<double> split(game.n_agents(), 0.0);
  for (const auto& [edge, w] : game.weights()) {
    const double zjk = z.at(edge);
    if (zjk < 0.0 || w < zjk) return false;
    split[edge.first] += zjk;
  }
  for (int j = 0; j < game.n_agents(); ++j) {
    if (std::abs(game.singleton_value(j) - split[j]) > 1e-9) return false;
  }
  return true;
}

EdgeMap equal_split_z(const AffinityGame& game) {
  EdgeMap z;
  for (int j = 0; j < game.n_agents(); ++j) {
    const auto& out = game.out_edges(j);
    for (const auto& [k, w] : out) z[{j, k}] = game.singleton_value(j) / static_cast<double>(out.size());
  }
  return z;
}

}  // namespace oaht::cag
