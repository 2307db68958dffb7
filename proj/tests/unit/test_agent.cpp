#include <doctest.h>

#include <cmath>
#include <random>

#include "../common/fixtures.hpp"
#include "../common/gradcheck.hpp"
#include "oaht/agent/agent_model.hpp"
#include "oaht/errors.hpp"

using namespace oaht::agent;
using oaht::AgentId;
using oaht::testing::random_obs;
using oaht::testing::random_vector;

namespace {

constexpr std::size_t kShared = 6;

AgentModel small_model(int actions = 5) { return AgentModel({kShared, oaht::world::kOwnObsDim, 4, 5, actions}); }

}  // namespace

TEST_SUITE("agent") {
  TEST_CASE("membership updates of the embedding table") {
    std::mt19937_64 rng(1);
    oaht::nn::ParameterStore s;
    TypeEncoder enc("e", kShared, oaht::world::kOwnObsDim, 4);
    enc.init(s, rng);
    EmbeddingTable table{{0, random_vector(4, rng)}, {1, random_vector(4, rng)}, {2, random_vector(4, rng)}};
    const auto obs = random_obs({0, 1, 3}, kShared, rng);
    const std::vector<AgentId> joined{3}, left{2};
    const auto next = update_embeddings(enc, s, table, obs, joined, left);
    CHECK(next.count(2) == 0);
    CHECK(next.size() == 3);

    auto zeroed = table;
    zeroed.erase(2);
    zeroed[3] = Vec(4, 0.0);
    CHECK(enc.advance(s, zeroed, obs) == next);
    CHECK(update_embeddings(enc, s, table, obs, joined, left) == next);

    const std::vector<AgentId> none;
    CHECK_THROWS_AS(update_embeddings(enc, s, table, obs, none, none), oaht::DomainError);
  }

  TEST_CASE("teammate policies are distributions") {
    std::mt19937_64 rng(2);
    const auto model = small_model();
    oaht::nn::ParameterStore s;
    model.init(s, rng);
    const std::vector<AgentId> ids{0, 1, 4};
    const auto g = oaht::graph::build(oaht::graph::Topology::Complete, 0, ids);
    EmbeddingTable table;
    for (AgentId id : ids) table[id] = random_vector(4, rng);
    const auto pols = model.infer_teammate_policies(s, table, g);
    CHECK(pols.size() == 2);
    for (const auto& [id, p] : pols) {
      double sum = 0.0;
      for (double x : p) {
        CHECK(x >= 0.0);
        sum += x;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }

    auto flat = s;
    const auto& head = model.head();
    const std::string w = head.weight_name(head.num_layers() - 1), b = head.bias_name(head.num_layers() - 1);
    std::fill(flat.values(w).begin(), flat.values(w).end(), 0.0);
    std::fill(flat.values(b).begin(), flat.values(b).end(), 0.0);
    for (const auto& [id, p] : model.infer_teammate_policies(flat, table, g)) {
      for (double x : p) CHECK(x == doctest::Approx(0.2).epsilon(1e-12));
    }
  }

  TEST_CASE("single-teammate star pipeline composed by hand") {
    std::mt19937_64 rng(3);
    const auto model = small_model();
    oaht::nn::ParameterStore s;
    model.init(s, rng);
    const std::vector<AgentId> ids{0, 2};
    const auto g = oaht::graph::build(oaht::graph::Topology::Star, 0, ids);
    const EmbeddingTable prev{{0, random_vector(4, rng)}};
    const auto obs = random_obs(ids, kShared, rng);
    const auto pols = model.forward(s, prev, obs, g);

    const auto proj = model.encoder().cell().project_shared(s, obs.shared);
    const Vec h0 = model.encoder().cell().step(s, proj, obs.own[0], prev.at(0));
    const Vec h2 = model.encoder().cell().step(s, proj, obs.own[1], Vec(4, 0.0));
    Vec f_in = h0;
    f_in.insert(f_in.end(), h2.begin(), h2.end());
    const Vec msg = model.message_pass().edge_net().forward(s, f_in);
    Vec g_in = h2;
    g_in.insert(g_in.end(), msg.begin(), msg.end());
    const Vec logits = model.head().forward(s, model.message_pass().node_net().forward(s, g_in));
    double z = 0.0;
    for (double l : logits) z += std::exp(l);
    for (std::size_t a = 0; a < logits.size(); ++a) CHECK(std::abs(pols.at(2)[a] - std::exp(logits[a]) / z) <= 1e-12);
  }

  TEST_CASE("agent model loss values") {
    std::mt19937_64 rng(4);
    const auto model = small_model();
    oaht::nn::ParameterStore s;
    model.init(s, rng);
    const std::string w = model.head().weight_name(1), b = model.head().bias_name(1);
    std::fill(s.values(w).begin(), s.values(w).end(), 0.0);
    std::fill(s.values(b).begin(), s.values(b).end(), 0.0);
    const std::vector<AgentId> ids{0, 1, 2};
    const auto g = oaht::graph::build(oaht::graph::Topology::Star, 0, ids);
    std::vector<AgentModelSample> ep{{{}, random_obs(ids, kShared, rng), g, {{1, 3}, {2, 0}}}};
    const auto uniform = agent_model_loss(model, s, ep, 1.0, false);
    CHECK(uniform.nll_per_prediction == doctest::Approx(std::log(5.0)).epsilon(1e-12));
    CHECK(uniform.predictions == 2);

    // Huge logit on the observed action for every teammate.
    s.values(b)[3] = 200.0;
    ep[0].teammate_actions = {{1, 3}, {2, 3}};
    CHECK(agent_model_loss(model, s, ep, 1.0, false).loss <= 1e-9);
    s.values(b)[3] = -2000.0;
    CHECK(agent_model_loss(model, s, ep, 1.0, false).clamp_warnings == 2);
  }

  TEST_CASE("agent model loss gradient matches finite differences on a two-step episode") {
    std::mt19937_64 rng(5);
    const auto model = AgentModel({kShared, oaht::world::kOwnObsDim, 4, 5, 5});
    oaht::nn::ParameterStore s;
    model.init(s, rng);
    const std::vector<AgentId> a{0, 1, 2}, b{0, 2, 3};
    std::vector<AgentModelSample> ep;
    ep.push_back({{}, random_obs(a, kShared, rng), oaht::graph::build(oaht::graph::Topology::Complete, 0, a),
                  {{1, 0}, {2, 4}}});
    ep.push_back({{{0, random_vector(4, rng)}, {2, random_vector(4, rng)}},
                  random_obs(b, kShared, rng),
                  oaht::graph::build(oaht::graph::Topology::Complete, 0, b),
                  {{2, 1}, {3, 2}}});
    auto loss = [&] { return agent_model_loss(model, s, ep, 0.7, false).loss; };
    auto grad = [&] { agent_model_loss(model, s, ep, 0.7, true); };
    const auto r = oaht::testing::check_gradients(s, loss, grad, 400, rng);
    CHECK_MESSAGE(r.max_rel_err <= oaht::testing::kGradRelTol, r.worst);
  }
}
