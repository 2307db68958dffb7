#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace oaht {

using AgentId = int;
inline constexpr AgentId kLearnerId = 0;

}  // namespace oaht

namespace oaht::graph {

enum class Topology { Star, Complete };

std::string to_string(Topology topology);
Topology parse_topology(const std::string& name);

// Per-timestep affinity graph over the active agents. Node 0 is always the
// learner, followed by teammates in ascending id order. Edges are directed and
// closed under reversal.
class DynamicAffinityGraph {
 public:
  Topology topology() const { return topology_; }
  AgentId learner() const { return nodes_.front(); }
  const std::vector<AgentId>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  // Directed edges as node ids, sorted.
  const std::vector<std::pair<AgentId, AgentId>>& edges() const { return edges_; }
  // Each undirected pair once, as node indices (a < b).
  const std::vector<std::pair<int, int>>& unordered_pairs() const { return pairs_; }
  // Directed edges as node indices.
  const std::vector<std::pair<int, int>>& edge_indices() const { return edge_indices_; }

  int index_of(AgentId id) const;  // -1 when absent
  bool contains(AgentId id) const { return index_of(id) >= 0; }
  bool has_edge(AgentId from, AgentId to) const;

  friend bool operator==(const DynamicAffinityGraph& a, const DynamicAffinityGraph& b) {
    return a.topology_ == b.topology_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  friend DynamicAffinityGraph build(Topology, AgentId, std::span<const AgentId>);
  Topology topology_ = Topology::Star;
  std::vector<AgentId> nodes_;
  std::vector<std::pair<AgentId, AgentId>> edges_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::pair<int, int>> edge_indices_;
};

DynamicAffinityGraph build(Topology topology, AgentId learner, std::span<const AgentId> active);

DynamicAffinityGraph on_membership_change(const DynamicAffinityGraph& g, std::span<const AgentId> joined,
                                          std::span<const AgentId> left);

}  // namespace oaht::graph
