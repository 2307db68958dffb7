#include "oaht/cag/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "oaht/errors.hpp"

namespace oaht::cag {

Coalition::Coalition(std::uint64_t mask) : mask_(mask) {
  if (mask == 0) throw DomainError("coalition must be non-empty");
}

Coalition::Coalition(std::initializer_list<int> members)
    : Coalition(from_members(std::vector<int>(members))) {}

Coalition Coalition::from_members(const std::vector<int>& members) {
  std::uint64_t mask = 0;
  for (int j : members) {
    if (j < 0 || j >= kMaxAgents) throw DomainError("agent id out of range: " + std::to_string(j));
    mask |= std::uint64_t{1} << j;
  }
  return Coalition(mask);
}

int Coalition::size() const { return std::popcount(mask_); }

std::vector<int> Coalition::members() const {
  std::vector<int> out;
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

AffinityGame::AffinityGame(int n_agents, EdgeMap weights, std::vector<double> singleton_values,
                           std::vector<double> preference_offsets)
    : n_agents_(n_agents),
      weights_(std::move(weights)),
      singleton_values_(std::move(singleton_values)),
      preference_offsets_(std::move(preference_offsets)) {
  if (n_agents < 1 || n_agents > kMaxAgents) {
    throw DomainError("n_agents must be in [1, " + std::to_string(kMaxAgents) + "]");
  }
  if (singleton_values_.empty()) singleton_values_.assign(n_agents, 0.0);
  if (preference_offsets_.empty()) preference_offsets_.assign(n_agents, 0.0);
  if (static_cast<int>(singleton_values_.size()) != n_agents ||
      static_cast<int>(preference_offsets_.size()) != n_agents) {
    throw DomainError("per-agent value lists must have n_agents entries");
  }
  for (double b : singleton_values_) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("singleton values must be finite and >= 0");
  }
  out_edges_.resize(n_agents);
  for (const auto& [edge, w] : weights_) {
    const auto [j, k] = edge;
    if (j < 0 || j >= n_agents || k < 0 || k >= n_agents) throw DomainError("edge endpoint out of range");
    if (j == k) throw DomainError("self-loop edges are not allowed");
    if (!std::isfinite(w)) throw DomainError("affinity weights must be finite");
    out_edges_[j].emplace_back(k, w);
  }
}

double AffinityGame::weight(int j, int k) const {
  auto it = weights_.find({j, k});
  return it == weights_.end() ? 0.0 : it->second;
}

CoalitionStructure::CoalitionStructure(int n_agents, std::vector<Coalition> parts)
    : n_agents_(n_agents), parts_(std::move(parts)), owner_(n_agents, -1) {
  if (n_agents < 1 || n_agents > kMaxAgents) throw DomainError("n_agents out of range");
  std::sort(parts_.begin(), parts_.end());
  const std::uint64_t full = n_agents == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_agents) - 1;
  std::uint64_t seen = 0;
  for (std::size_t p = 0; p < parts_.size(); ++p) {
    const std::uint64_t m = parts_[p].mask();
    if ((m & ~full) != 0) throw DomainError("coalition references an agent outside the game");
    if ((m & seen) != 0) throw DomainError("coalition structure parts overlap");
    seen |= m;
    for (int j : parts_[p].members()) owner_[j] = static_cast<int>(p);
  }
  if (seen != full) throw DomainError("coalition structure does not cover every agent");
}

CoalitionStructure CoalitionStructure::grand(int n_agents) {
  return CoalitionStructure(n_agents, {Coalition((std::uint64_t{1} << n_agents) - 1)});
}

CoalitionStructure CoalitionStructure::singletons(int n_agents) {
  std::vector<Coalition> parts;
  for (int j = 0; j < n_agents; ++j) parts.push_back(Coalition::singleton(j));
  return CoalitionStructure(n_agents, std::move(parts));
}

CoalitionStructure CoalitionStructure::from_rgs(const std::vector<int>& rgs) {
  const int n = static_cast<int>(rgs.size());
  std::vector<std::uint64_t> masks;
  for (int j = 0; j < n; ++j) {
    const int b = rgs[j];
    if (b < 0 || b > static_cast<int>(masks.size())) throw DomainError("not a restricted-growth string");
    if (b == static_cast<int>(masks.size())) masks.push_back(0);
    masks[b] |= std::uint64_t{1} << j;
  }
  std::vector<Coalition> parts;
  for (auto m : masks) parts.emplace_back(m);
  return CoalitionStructure(n, std::move(parts));
}

bool CoalitionStructure::contains_part(const Coalition& c) const {
  return std::binary_search(parts_.begin(), parts_.end(), c);
}

AffinityGame translate_preferences(const AffinityGame& game) {
  std::vector<double> offsets(game.n_agents());
  for (int j = 0; j < game.n_agents(); ++j) {
    offsets[j] = game.preference_offset(j) + game.singleton_value(j);
  }
  return AffinityGame(game.n_agents(), game.weights(), std::vector<double>(game.n_agents(), 0.0),
                      std::move(offsets));
}

AffinityGame random_game(std::mt19937_64& rng, const RandomGameOptions& options) {
  const int n = options.n_agents;
  std::bernoulli_distribution has_edge(options.edge_probability);
  std::uniform_int_distribution<int> lattice(options.weight_lo, options.weight_hi);
  std::uniform_int_distribution<int> singleton(0, std::max(0, options.singleton_hi));
  EdgeMap weights;
  for (int j = 0; j < n; ++j) {
    for (int k = options.symmetric ? j + 1 : 0; k < n; ++k) {
      if (j == k || !has_edge(rng)) continue;
      const double w = 0.25 * lattice(rng);
      weights[{j, k}] = w;
      if (options.symmetric) weights[{k, j}] = w;
    }
  }
  std::vector<double> b(n, 0.0);
  if (options.singleton_hi > 0) {
    for (auto& v : b) v = 0.25 * singleton(rng);
  }
  return AffinityGame(n, std::move(weights), std::move(b));
}

}  // namespace oaht::cag
