#include "oaht/graph/dynamic_graph.hpp"

#include <algorithm>

#include "oaht/errors.hpp"

namespace oaht::graph {

std::string to_string(Topology topology) { return topology == Topology::Star ? "star" : "complete"; }

Topology parse_topology(const std::string& name) {
  if (name == "star") return Topology::Star;
  if (name == "complete") return Topology::Complete;
  throw DomainError("unknown graph topology: " + name);
}

int DynamicAffinityGraph::index_of(AgentId id) const {
  if (!nodes_.empty() && nodes_.front() == id) return 0;
  auto it = std::lower_bound(nodes_.begin() + 1, nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return -1;
  return static_cast<int>(it - nodes_.begin());
}

bool DynamicAffinityGraph::has_edge(AgentId from, AgentId to) const {
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(from, to));
}

DynamicAffinityGraph build(Topology topology, AgentId learner, std::span<const AgentId> active) {
  if (std::find(active.begin(), active.end(), learner) == active.end()) {
    throw DomainError("learner must be in the active set");
  }
  DynamicAffinityGraph g;
  g.topology_ = topology;
  g.nodes_.push_back(learner);
  for (AgentId id : active) {
    if (id != learner) g.nodes_.push_back(id);
  }
  std::sort(g.nodes_.begin() + 1, g.nodes_.end());
  if (std::adjacent_find(g.nodes_.begin() + 1, g.nodes_.end()) != g.nodes_.end()) {
    throw DomainError("duplicate agent id in active set");
  }

  const int n = static_cast<int>(g.nodes_.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (topology == Topology::Star && a != 0) continue;
      g.pairs_.emplace_back(a, b);
      g.edge_indices_.emplace_back(a, b);
      g.edge_indices_.emplace_back(b, a);
    }
  }
  std::sort(g.edge_indices_.begin(), g.edge_indices_.end());
  for (const auto& [a, b] : g.edge_indices_) g.edges_.emplace_back(g.nodes_[a], g.nodes_[b]);
  std::sort(g.edges_.begin(), g.edges_.end());
  return g;
}

DynamicAffinityGraph on_membership_change(const DynamicAffinityGraph& g, std::span<const AgentId> joined,
                                          std::span<const AgentId> left) {
  std::vector<AgentId> active;
  for (AgentId id : left) {
    if (id == g.learner()) throw DomainError("the learner never leaves the environment");
    if (!g.contains(id)) throw DomainError("departing agent " + std::to_string(id) + " is not in the graph");
  }
  for (AgentId id : joined) {
    if (g.contains(id)) throw DomainError("joining agent " + std::to_string(id) + " is already in the graph");
  }
  for (AgentId id : g.nodes()) {
    if (std::find(left.begin(), left.end(), id) == left.end()) active.push_back(id);
  }
  active.insert(active.end(), joined.begin(), joined.end());
  return build(g.topology(), g.learner(), active);
}

}  // namespace oaht::graph
