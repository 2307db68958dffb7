#include "oaht/runner/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "oaht/cag/game.hpp"
#include "oaht/tabular/bellman.hpp"
#include "oaht/tabular/dvsc.hpp"

namespace oaht::runner {

namespace {

cag::AffinityGame random_cag(std::mt19937_64& rng, int weight_lo) {
  cag::RandomGameOptions o;
  o.n_agents = std::uniform_int_distribution<int>(2, 6)(rng);
  o.weight_lo = weight_lo;
  o.symmetric = true;
  return cag::random_game(rng, o);
}

tabular::Policy random_policy(const tabular::TabularGame& game, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  tabular::Policy pi = tabular::uniform_policy(game);
  for (auto& row : pi) {
    double s = 0.0;
    for (double& x : row) s += (x = unit(rng));
    for (double& x : row) x /= s;
  }
  return pi;
}

}  // namespace

SuiteResult verify_inner_stability(int games, std::uint64_t seed) {
  SuiteResult r;
  r.name = "inner_stability";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < games; ++i) {
    const auto game = random_cag(rng, -4);
    const auto opt = cag::max_social_welfare_partition(game);
    ++r.checked;
    if (!cag::is_inner_stable(game, opt.partition)) ++r.failed;
  }
  return r;
}

SuiteResult verify_grand_coalition_core(int games, std::uint64_t seed) {
  SuiteResult r;
  r.name = "grand_coalition_core";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < games; ++i) {
    const auto game = random_cag(rng, 0);
    ++r.checked;
    if (!cag::is_strict_core_stable(game, cag::CoalitionStructure::grand(game.n_agents()))) ++r.failed;
  }
  return r;
}

SuiteResult verify_core_condition_soundness(int games, std::uint64_t seed) {
  SuiteResult r;
  r.name = "core_condition_soundness";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> quarter(0, 4);
  int attempts = 0;
  while (r.checked < games && attempts < 100 * games) {
    ++attempts;
    const auto base = random_cag(rng, 0);
    cag::EdgeMap z;
    std::vector<double> b(base.n_agents(), 0.0);
    for (const auto& [edge, w] : base.weights()) {
      z[edge] = w * 0.25 * quarter(rng);
      b[edge.first] += z[edge];
    }
    const cag::AffinityGame game(base.n_agents(), base.weights(), b);
    if (!cag::grand_coalition_core_condition(game, z)) continue;
    ++r.checked;
    if (!cag::is_strict_core_stable(game, cag::CoalitionStructure::grand(game.n_agents()))) ++r.failed;
  }
  return r;
}

SuiteResult verify_contraction(int games, std::uint64_t seed) {
  SuiteResult r;
  r.name = "bellman_contraction";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < games; ++i) {
    tabular::RandomTabularOptions o;
    o.topology = i % 2 ? graph::Topology::Star : graph::Topology::Complete;
    const auto game = tabular::random_tabular_game(rng, o);
    const auto vi = tabular::value_iteration(game);
    ++r.checked;
    bool ok = true;
    for (double ratio : vi.ratios) {
      r.worst = std::max(r.worst, ratio);
      if (ratio > game.gamma() + 1e-9) ok = false;
    }
    if (!ok) ++r.failed;
  }
  return r;
}

SuiteResult verify_factorization(int games, std::uint64_t seed) {
  SuiteResult r;
  r.name = "factorization";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < games; ++i) {
    tabular::RandomTabularOptions o;
    o.topology = i % 2 ? graph::Topology::Star : graph::Topology::Complete;
    const auto game = tabular::random_tabular_game(rng, o);
    const auto f = tabular::exact_factorized_q(game, random_policy(game, rng));
    ++r.checked;
    r.worst = std::max(r.worst, f.identity_error);
    if (f.identity_error > 1e-8) ++r.failed;
  }
  return r;
}

SuiteResult verify_dvsc(int games, std::uint64_t seed) {
  SuiteResult r;
  r.name = "dvsc";
  std::mt19937_64 rng(seed);
  int precondition_failures = 0;
  for (int i = 0; i < games; ++i) {
    tabular::RandomTabularOptions o;
    o.topology = i % 2 ? graph::Topology::Star : graph::Topology::Complete;
    if (i % 3 == 2) {
      o.num_agents = 2;
      o.num_world_states = 3;
      o.max_actions = 3;
    } else {
      o.num_agents = 3;
      o.num_world_states = 2;
      o.max_actions = 2;
    }
    const auto game = tabular::random_tabular_game(rng, o);
    const auto report = tabular::dvsc_check(game);
    ++r.checked;
    r.worst = std::min(r.worst, report.worst_gap);
    if (!report.precondition_holds) ++precondition_failures;
    if (!report.dominant || !report.precondition_holds) ++r.failed;
  }
  if (precondition_failures > 0) {
    std::ostringstream msg;
    msg << precondition_failures << " games failed the existence precondition";
    r.detail = msg.str();
  }
  return r;
}

std::vector<SuiteResult> verify_all(int games, std::uint64_t seed) {
  return {verify_inner_stability(games, seed),        verify_grand_coalition_core(games, seed + 1),
          verify_core_condition_soundness(games, seed + 2), verify_contraction(games, seed + 3),
          verify_factorization(games, seed + 4),       verify_dvsc(games, seed + 5)};
}

}  // namespace oaht::runner
