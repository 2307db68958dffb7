#pragma once

#include <random>
#include <vector>

#include "oaht/graph/dynamic_graph.hpp"
#include "oaht/world/open_world.hpp"

namespace oaht::testing {

inline nn::Vec random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  nn::Vec v(n);
  for (double& x : v) x = u(rng);
  return v;
}

// Synthetic observation batch for agents `ids` (learner first).
inline world::ObsBatch random_obs(const std::vector<AgentId>& ids, std::size_t shared_dim, std::mt19937_64& rng) {
  world::ObsBatch b;
  b.shared = random_vector(shared_dim, rng);
  b.ids = ids;
  for (std::size_t i = 0; i < ids.size(); ++i) b.own.push_back(random_vector(world::kOwnObsDim, rng));
  return b;
}

}  // namespace oaht::testing
