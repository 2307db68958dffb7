#include <doctest.h>

#include <vector>

#include "oaht/errors.hpp"
#include "oaht/graph/dynamic_graph.hpp"

using namespace oaht::graph;
using oaht::AgentId;

TEST_SUITE("graph") {
  TEST_CASE("star graphs connect only the learner") {
    const std::vector<AgentId> alone{0};
    auto g = build(Topology::Star, 0, alone);
    CHECK(g.nodes() == std::vector<AgentId>{0});
    CHECK(g.edges().empty());

    const std::vector<AgentId> team{2, 0, 1};
    g = build(Topology::Star, 0, team);
    CHECK(g.nodes() == std::vector<AgentId>{0, 1, 2});
    CHECK(g.edges() == std::vector<std::pair<AgentId, AgentId>>{{0, 1}, {0, 2}, {1, 0}, {2, 0}});
    CHECK(g.unordered_pairs() == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}});
  }

  TEST_CASE("complete graphs have n(n-1) directed edges closed under reversal") {
    const std::vector<AgentId> team{0, 1, 2};
    const auto g = build(Topology::Complete, 0, team);
    CHECK(g.edges().size() == 6);
    for (const auto& [j, k] : g.edges()) CHECK(g.has_edge(k, j));
    CHECK(g.unordered_pairs().size() == 3);
    CHECK(g.index_of(2) == 2);
    CHECK(g.index_of(7) == -1);
  }

  TEST_CASE("membership changes") {
    const std::vector<AgentId> team{0, 1, 2};
    const auto star = build(Topology::Star, 0, team);
    CHECK(on_membership_change(star, {}, {}) == star);
    const std::vector<AgentId> two{2};
    const auto shrunk = on_membership_change(star, {}, two);
    CHECK(shrunk.edges() == std::vector<std::pair<AgentId, AgentId>>{{0, 1}, {1, 0}});

    const std::vector<AgentId> pair{0, 1}, three{3};
    const auto grown = on_membership_change(build(Topology::Complete, 0, pair), three, {});
    CHECK(grown.nodes() == std::vector<AgentId>{0, 1, 3});
    CHECK(grown.edges().size() == 6);
  }

  TEST_CASE("invalid memberships are rejected") {
    const std::vector<AgentId> no_learner{1, 2};
    CHECK_THROWS_AS(build(Topology::Star, 0, no_learner), oaht::DomainError);
    const std::vector<AgentId> dup{0, 1, 1};
    CHECK_THROWS_AS(build(Topology::Star, 0, dup), oaht::DomainError);
    const std::vector<AgentId> team{0, 1}, learner{0}, ghost{5};
    const auto g = build(Topology::Star, 0, team);
    CHECK_THROWS_AS(on_membership_change(g, {}, learner), oaht::DomainError);
    CHECK_THROWS_AS(on_membership_change(g, {}, ghost), oaht::DomainError);
  }

  TEST_CASE("topology names round trip") {
    CHECK(parse_topology(to_string(Topology::Star)) == Topology::Star);
    CHECK(parse_topology(to_string(Topology::Complete)) == Topology::Complete);
    CHECK_THROWS_AS(parse_topology("ring"), oaht::DomainError);
  }
}
