#include <doctest.h>

#include <random>

#include "oaht/cag/game.hpp"
#include "oaht/errors.hpp"

using namespace oaht::cag;

namespace {

// Oracle: direct summation over the edge list.
double summed_preference(const AffinityGame& g, int j, const Coalition& c) {
  if (c.size() == 1) return g.singleton_value(j);
  double v = 0.0;
  for (const auto& [edge, w] : g.weights()) {
    if (edge.first == j && c.contains(edge.second)) v += w;
  }
  return v - g.preference_offset(j);
}

}  // namespace

TEST_SUITE("cag") {
  TEST_CASE("constructor rejects self loops, bad endpoints and negative singleton values") {
    CHECK_THROWS_AS(AffinityGame(2, {{{0, 0}, 1.0}}, {0, 0}), oaht::DomainError);
    CHECK_THROWS_AS(AffinityGame(2, {{{0, 2}, 1.0}}, {0, 0}), oaht::DomainError);
    CHECK_THROWS_AS(AffinityGame(2, {}, {-0.1, 0}), oaht::DomainError);
    CHECK_THROWS_AS(Coalition(std::uint64_t{0}), oaht::DomainError);
  }

  TEST_CASE("preference value") {
    const AffinityGame g(3, {{{0, 1}, 2.0}, {{0, 2}, 1.5}}, {0.0, 0.7, 0.0});
    CHECK(preference_value(g, 1, Coalition{1}) == doctest::Approx(0.7));
    CHECK(preference_value(g, 1, Coalition{0, 1}) == 0.0);
    CHECK(preference_value(g, 0, Coalition{0, 1, 2}) == doctest::Approx(3.5));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
      const auto game = random_game(rng, {5, 0.6, -4, 4, false, 2});
      for (std::uint64_t m = 1; m < 32; ++m) {
        const Coalition c(m);
        for (int j : c.members()) CHECK(preference_value(game, j, c) == summed_preference(game, j, c));
      }
    }
  }

  TEST_CASE("weak blocking") {
    const AffinityGame g(2, {{{0, 1}, 1.0}, {{1, 0}, 1.0}}, {0.0, 0.0});
    const auto singles = CoalitionStructure::singletons(2);
    CHECK(is_weakly_blocking(g, singles, Coalition{0, 1}));
    CHECK_FALSE(is_weakly_blocking(g, singles, Coalition{0}));
    CHECK_FALSE(is_weakly_blocking(g, CoalitionStructure::grand(2), Coalition{0, 1}));

    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
      const auto game = random_game(rng, {5, 0.7, 0, 4, true, 0});
      const auto grand = CoalitionStructure::grand(5);
      for (std::uint64_t m = 1; m < 32; ++m) CHECK_FALSE(is_weakly_blocking(game, grand, Coalition(m)));
    }
  }

  TEST_CASE("strict core stability") {
    CHECK(is_strict_core_stable(AffinityGame(1, {}, {0.0}), CoalitionStructure::grand(1)));
    const AffinityGame repel(2, {{{0, 1}, -1.0}, {{1, 0}, -1.0}}, {0.0, 0.0});
    CHECK_FALSE(is_strict_core_stable(repel, CoalitionStructure::grand(2)));
    CHECK(is_strict_core_stable(repel, CoalitionStructure::singletons(2)));
  }

  TEST_CASE("inner stability") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 40; ++i) {
      const auto game = random_game(rng, {5, 0.7, -4, 4, true, 0});
      CHECK(is_inner_stable(game, CoalitionStructure::singletons(5)));
      const auto opt = max_social_welfare_partition(game);
      CHECK(is_inner_stable(game, opt.partition));
      if (is_strict_core_stable(game, opt.partition)) CHECK(is_inner_stable(game, opt.partition));
    }
  }

  TEST_CASE("welfare-optimal partitions can be inner unstable once singleton values are non-zero") {
    const AffinityGame g(2, {{{0, 1}, 0.75}, {{1, 0}, 0.75}}, {1.0, 0.0});
    const auto opt = max_social_welfare_partition(g);
    CHECK(opt.partition == CoalitionStructure::grand(2));
    CHECK(opt.welfare == doctest::Approx(1.5));
    CHECK_FALSE(is_inner_stable(g, opt.partition));
  }

  TEST_CASE("max social welfare partition") {
    const AffinityGame repel(3, {{{0, 1}, -1.0}, {{1, 0}, -1.0}, {{1, 2}, -0.5}, {{2, 1}, -0.5}}, {0, 0, 0});
    auto opt = max_social_welfare_partition(repel);
    // {0, 2} ties with the singletons and has the smaller encoding.
    CHECK(opt.partition == CoalitionStructure::from_rgs({0, 1, 0}));
    CHECK(opt.welfare == 0.0);

    const AffinityGame attract(3, {{{0, 1}, 1.0}, {{1, 0}, 1.0}, {{1, 2}, 0.5}, {{2, 1}, 0.5}}, {0, 0, 0});
    opt = max_social_welfare_partition(attract);
    CHECK(opt.partition == CoalitionStructure::grand(3));
    CHECK(opt.welfare == doctest::Approx(3.0));

    opt = max_social_welfare_partition(AffinityGame(1, {}, {0.3}));
    CHECK(opt.welfare == doctest::Approx(0.3));

    std::mt19937_64 rng(2);
    CHECK_THROWS_AS(max_social_welfare_partition(random_game(rng, {kMaxWelfareAgents + 1, 0.5, -1, 1, true, 0})),
                    oaht::CapacityError);
  }

  TEST_CASE("symmetry") {
    CHECK(is_symmetric(AffinityGame(3, {}, {0, 0, 0})));
    CHECK(is_symmetric(AffinityGame(2, {{{0, 1}, 2.0}, {{1, 0}, 2.0}}, {0, 0})));
    CHECK_FALSE(is_symmetric(AffinityGame(2, {{{0, 1}, 2.0}}, {0, 0})));
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) CHECK(is_symmetric(random_game(rng, {6, 0.5, -4, 4, true, 0})));
  }

  TEST_CASE("grand coalition core condition") {
    const AffinityGame g(3, {{{0, 1}, 1.0}, {{1, 0}, 1.0}, {{1, 2}, 0.5}, {{2, 1}, 0.5}}, {0, 0, 0});
    EdgeMap zero;
    for (const auto& [e, w] : g.weights()) zero[e] = 0.0;
    CHECK(grand_coalition_core_condition(g, zero));

    const AffinityGame single(2, {{{0, 1}, 3.0}}, {2.0, 0.0});
    CHECK(grand_coalition_core_condition(single, {{{0, 1}, 2.0}}));
    CHECK(is_strict_core_stable(single, CoalitionStructure::grand(2)));
    CHECK_FALSE(grand_coalition_core_condition(single, {{{0, 1}, 1.0}}));
  }

  TEST_CASE("core condition requires non-negative shares") {
    const AffinityGame g(3, {{{0, 1}, -1.0}, {{0, 2}, 1.0}, {{2, 0}, 0.0}}, {0, 0, 0});
    const EdgeMap z{{{0, 1}, -1.0}, {{0, 2}, 1.0}, {{2, 0}, 0.0}};
    CHECK_FALSE(is_strict_core_stable(g, CoalitionStructure::grand(3)));
    CHECK_FALSE(grand_coalition_core_condition(g, z));
  }

  TEST_CASE("translation preserves every agent's ranking of coalitions") {
    const AffinityGame plain(2, {{{0, 1}, 1.0}, {{1, 0}, 1.0}}, {0, 0});
    CHECK(translate_preferences(plain) == plain);
    const AffinityGame g(2, {{{0, 1}, 1.0}, {{1, 0}, 1.0}}, {0.5, 0.0});
    CHECK(preference_value(translate_preferences(g), 0, Coalition{0}) == 0.0);

    std::mt19937_64 rng(17);
    for (int i = 0; i < 30; ++i) {
      const auto game = random_game(rng, {4, 0.7, -4, 4, true, 3});
      const auto shifted = translate_preferences(game);
      for (int j = 0; j < 4; ++j) {
        for (std::uint64_t a = 1; a < 16; ++a) {
          for (std::uint64_t b = 1; b < 16; ++b) {
            const Coalition ca(a), cb(b);
            if (!ca.contains(j) || !cb.contains(j)) continue;
            CHECK((preference_value(game, j, ca) < preference_value(game, j, cb)) ==
                  (preference_value(shifted, j, ca) < preference_value(shifted, j, cb)));
          }
        }
      }
    }
  }

  TEST_CASE("structured text round trip") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 10; ++i) {
      const auto game = translate_preferences(random_game(rng, {5, 0.6, -4, 4, false, 3}));
      CHECK(parse_game(serialize_game(game)) == game);
    }
    CHECK_THROWS_AS(parse_game("{\"n_agents\": 2}"), oaht::DomainError);
  }
}
