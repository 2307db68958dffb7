#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../common/fixtures.hpp"
#include "../common/gradcheck.hpp"
#include "../common/tabular_oracles.hpp"
#include "oaht/cag/game.hpp"
#include "oaht/tabular/bellman.hpp"
#include "oaht/tabular/dvsc.hpp"
#include "oaht/train/trainer.hpp"
#include "oaht/world/open_world.hpp"

namespace {

using oaht::AgentId;
using oaht::graph::Topology;
using oaht::nn::Vec;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// Coalition games: plain-array oracle.

struct PlainGame {
  int n = 0;
  std::vector<std::vector<double>> w;
  std::vector<std::vector<bool>> edge;
  std::vector<double> b;
};

PlainGame plain(const oaht::cag::AffinityGame& g) {
  PlainGame p;
  p.n = g.n_agents();
  p.w.assign(p.n, std::vector<double>(p.n, 0.0));
  p.edge.assign(p.n, std::vector<bool>(p.n, false));
  for (const auto& [e, w] : g.weights()) {
    p.w[e.first][e.second] = w;
    p.edge[e.first][e.second] = true;
  }
  p.b = g.singleton_values();
  return p;
}

double plain_pref(const PlainGame& g, int j, std::uint64_t mask) {
  if (mask == (std::uint64_t{1} << j)) return g.b[j];
  double v = 0.0;
  for (int k = 0; k < g.n; ++k) {
    if (k != j && (mask >> k & 1) && g.edge[j][k]) v += g.w[j][k];
  }
  return v;
}

// own[j] is the mask of j's block.
bool plain_blocks(const PlainGame& g, const std::vector<std::uint64_t>& own, std::uint64_t c) {
  bool strict = false;
  for (int j = 0; j < g.n; ++j) {
    if (!(c >> j & 1)) continue;
    const double in_c = plain_pref(g, j, c), now = plain_pref(g, j, own[j]);
    if (in_c < now) return false;
    if (in_c > now) strict = true;
  }
  return strict;
}

std::vector<std::uint64_t> owner_masks(const oaht::cag::CoalitionStructure& cs) {
  std::vector<std::uint64_t> own(cs.n_agents());
  for (int j = 0; j < cs.n_agents(); ++j) own[j] = cs.coalition_of(j).mask();
  return own;
}

bool plain_inner_stable(const PlainGame& g, const std::vector<std::uint64_t>& own) {
  for (int j = 0; j < g.n; ++j) {
    for (std::uint64_t sub = (own[j] - 1) & own[j]; sub; sub = (sub - 1) & own[j]) {
      if (plain_blocks(g, own, sub)) return false;
    }
  }
  return true;
}

bool plain_core_stable(const PlainGame& g, const std::vector<std::uint64_t>& own) {
  for (std::uint64_t c = 1; c < (std::uint64_t{1} << g.n); ++c) {
    if (plain_blocks(g, own, c)) return false;
  }
  return true;
}

double plain_welfare(const PlainGame& g, const std::vector<std::uint64_t>& own) {
  double s = 0.0;
  for (int j = 0; j < g.n; ++j) s += plain_pref(g, j, own[j]);
  return s;
}

// Maximum welfare over all set partitions by recursive block assignment.
double plain_max_welfare(const PlainGame& g) {
  std::vector<std::uint64_t> blocks;
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(int)> rec = [&](int j) {
    if (j == g.n) {
      std::vector<std::uint64_t> own(g.n);
      for (auto m : blocks) {
        for (int k = 0; k < g.n; ++k) {
          if (m >> k & 1) own[k] = m;
        }
      }
      best = std::max(best, plain_welfare(g, own));
      return;
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      blocks[i] |= std::uint64_t{1} << j;
      rec(j + 1);
      blocks[i] &= ~(std::uint64_t{1} << j);
    }
    blocks.push_back(std::uint64_t{1} << j);
    rec(j + 1);
    blocks.pop_back();
  };
  rec(0);
  return best;
}

oaht::cag::AffinityGame random_symmetric_game(std::mt19937_64& rng, int weight_lo) {
  oaht::cag::RandomGameOptions o;
  o.n_agents = std::uniform_int_distribution<int>(2, 6)(rng);
  o.weight_lo = weight_lo;
  o.symmetric = true;
  return oaht::cag::random_game(rng, o);
}

Outcome criterion_game_theory() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  int inner_ok = 0, core_ok = 0, condition_ok = 0, condition_n = 0;
  constexpr int kGames = 200;
  for (int i = 0; i < kGames; ++i) {
    const auto g = random_symmetric_game(rng, -4);
    const auto p = plain(g);
    const auto opt = oaht::cag::max_social_welfare_partition(g);
    const auto own = owner_masks(opt.partition);
    const bool optimal = plain_welfare(p, own) == plain_max_welfare(p) && opt.welfare == plain_welfare(p, own);
    if (optimal && plain_inner_stable(p, own) && oaht::cag::is_inner_stable(g, opt.partition)) ++inner_ok;
  }
  for (int i = 0; i < kGames; ++i) {
    const auto g = random_symmetric_game(rng, 0);
    const auto grand = oaht::cag::CoalitionStructure::grand(g.n_agents());
    if (plain_core_stable(plain(g), owner_masks(grand)) && oaht::cag::is_strict_core_stable(g, grand)) ++core_ok;
  }
  std::uniform_int_distribution<int> quarter(0, 4);
  for (int attempt = 0; condition_n < kGames && attempt < 100 * kGames; ++attempt) {
    const auto base = random_symmetric_game(rng, 0);
    oaht::cag::EdgeMap z;
    std::vector<double> b(base.n_agents(), 0.0);
    for (const auto& [e, w] : base.weights()) {
      z[e] = w * 0.25 * quarter(rng);
      b[e.first] += z[e];
    }
    const oaht::cag::AffinityGame g(base.n_agents(), base.weights(), b);
    if (!oaht::cag::grand_coalition_core_condition(g, z)) continue;
    ++condition_n;
    const auto grand = oaht::cag::CoalitionStructure::grand(g.n_agents());
    if (plain_core_stable(plain(g), owner_masks(grand))) ++condition_ok;
  }
  const double secs = seconds_since(t0);
  return {inner_ok == kGames && core_ok == kGames && condition_n == kGames && condition_ok == condition_n && secs <= 30.0,
          fmt("inner %d/%d, grand core %d/%d, core condition %d/%d, %.1fs", inner_ok, kGames, core_ok, kGames,
              condition_ok, condition_n, secs)};
}

// ---------------------------------------------------------------------------
// Tabular games.

oaht::tabular::TabularGame random_tabular(std::mt19937_64& rng, int i) {
  oaht::tabular::RandomTabularOptions o;
  o.topology = i % 2 ? Topology::Star : Topology::Complete;
  o.gamma = std::uniform_real_distribution<double>(0.5, 0.95)(rng);
  return oaht::tabular::random_tabular_game(rng, o);
}

Outcome criterion_bellman() {
  std::mt19937_64 rng(202);
  constexpr int kGames = 50;
  int ok = 0;
  double worst_ratio_margin = -1.0, worst_err = 0.0;
  for (int i = 0; i < kGames; ++i) {
    const auto g = random_tabular(rng, i);
    const auto vi = oaht::tabular::value_iteration(g);
    bool good = !vi.ratios.empty();
    for (double r : vi.ratios) {
      worst_ratio_margin = std::max(worst_ratio_margin, r - g.gamma());
      if (r > g.gamma() + 1e-9) good = false;
    }
    const int h = oaht::testing::truncation_horizon(g.gamma(), oaht::testing::max_abs_reward(g), 1e-10);
    const double err = oaht::testing::sup_diff(oaht::testing::backward_induction(g, h), vi.q);
    worst_err = std::max(worst_err, err);
    if (err > 1e-8) good = false;
    ok += good;
  }
  return {ok == kGames, fmt("%d/%d games, max(ratio - gamma) %.3g, fixed-point error %.3g", ok, kGames,
                            worst_ratio_margin, worst_err)};
}

oaht::tabular::Policy random_stochastic_policy(const oaht::tabular::TabularGame& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  auto pi = oaht::tabular::uniform_policy(g);
  for (auto& row : pi) {
    double s = 0.0;
    for (double& x : row) s += (x = u(rng));
    for (double& x : row) x /= s;
  }
  return pi;
}

Outcome criterion_factorization() {
  std::mt19937_64 rng(303);
  constexpr int kGames = 50;
  int ok = 0;
  double worst = 0.0;
  for (int i = 0; i < kGames; ++i) {
    const auto g = random_tabular(rng, i);
    const auto pi = random_stochastic_policy(g, rng);
    const auto f = oaht::tabular::exact_factorized_q(g, pi);
    const auto full = oaht::testing::iterate_policy(g, pi, [&](std::size_t s, int a) { return g.reward(s, a); });
    auto sum = oaht::testing::zeros_like(g);
    double comp_err = 0.0;
    for (const auto& [e, q] : f.pairwise) {
      const auto [j, k] = e;
      const auto oracle = oaht::testing::iterate_policy(g, pi, [&, j, k](std::size_t s, int a) {
        const auto act = g.decode(s, a);
        return act[j] >= 0 && act[k] >= 0 ? g.alpha(j, k, s, act[j], act[k]) : 0.0;
      });
      comp_err = std::max(comp_err, oaht::testing::sup_diff(oracle, q));
      for (std::size_t s = 0; s < sum.size(); ++s) {
        for (std::size_t a = 0; a < sum[s].size(); ++a) sum[s][a] += q[s][a];
      }
    }
    for (std::size_t j = 0; j < f.individual.size(); ++j) {
      const int agent = static_cast<int>(j);
      const auto oracle = oaht::testing::iterate_policy(g, pi, [&, agent](std::size_t s, int a) {
        const auto act = g.decode(s, a);
        return act[agent] >= 0 ? g.indiv(agent, s, act[agent]) : 0.0;
      });
      comp_err = std::max(comp_err, oaht::testing::sup_diff(oracle, f.individual[j]));
      for (std::size_t s = 0; s < sum.size(); ++s) {
        for (std::size_t a = 0; a < sum[s].size(); ++a) sum[s][a] += f.individual[j][s][a];
      }
    }
    const double err = oaht::testing::sup_diff(full, sum);
    worst = std::max({worst, err, comp_err});
    ok += err <= 1e-8 && comp_err <= 1e-8;
  }
  return {ok == kGames, fmt("%d/%d games, worst deviation %.3g", ok, kGames, worst)};
}

Outcome criterion_dvsc() {
  std::mt19937_64 rng(404);
  constexpr int kGames = 20;
  int ok = 0;
  double worst_gap = std::numeric_limits<double>::infinity();
  std::size_t policies = 0;
  for (int i = 0; i < kGames; ++i) {
    oaht::tabular::RandomTabularOptions o;
    o.topology = i % 2 ? Topology::Star : Topology::Complete;
    if (i % 4 < 2) {
      o.num_agents = 3;
      o.num_world_states = 2;
      o.max_actions = 2;
    } else {
      o.num_agents = 2;
      o.num_world_states = 3;
      o.max_actions = 3;
    }
    const auto g = oaht::tabular::random_tabular_game(rng, o);
    const std::size_t S = g.num_states();
    const int A = g.num_learner_actions();
    std::vector<std::vector<double>> values;
    std::vector<int> choice(S, 0);
    auto reward = [&](std::size_t s, int a) { return g.reward(s, a); };
    while (true) {
      const auto pi = oaht::tabular::deterministic_policy(g, choice);
      values.push_back(oaht::testing::state_values(g, pi, oaht::testing::iterate_policy(g, pi, reward)));
      std::size_t d = 0;
      while (d < S && ++choice[d] == A) choice[d++] = 0;
      if (d == S) break;
    }
    policies += values.size();
    std::size_t best = 0;
    double best_welfare = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < values.size(); ++p) {
      double w = 0.0;
      for (double v : values[p]) w += v;
      if (w > best_welfare) {
        best_welfare = w;
        best = p;
      }
    }
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& v : values) {
      for (std::size_t s = 0; s < S; ++s) gap = std::min(gap, values[best][s] - v[s]);
    }
    worst_gap = std::min(worst_gap, gap);
    const auto report = oaht::tabular::dvsc_check(g);
    const bool agree = std::abs(report.best_welfare - best_welfare / static_cast<double>(S)) <= 1e-9;
    ok += gap >= -1e-9 && report.dominant && report.precondition_holds && agree;
  }
  return {ok == kGames, fmt("%d/%d games, %zu policies enumerated, worst dominance gap %.3g", ok, kGames, policies,
                            worst_gap)};
}

// ---------------------------------------------------------------------------
// Marginalized learner values.

Outcome criterion_marginalization() {
  std::mt19937_64 rng(505);
  constexpr int kCases = 100;
  int ok = 0;
  double worst = 0.0;
  for (int i = 0; i < kCases; ++i) {
    const int teammates = std::uniform_int_distribution<int>(1, 3)(rng);
    const int A = std::uniform_int_distribution<int>(2, 5)(rng);
    const int K = std::uniform_int_distribution<int>(1, A - 1)(rng);
    oaht::value::Utilities u;
    u.num_actions = A;
    u.rank = K;
    u.pair_sign = i % 3 == 0 ? -1.0 : 1.0;
    std::vector<AgentId> ids{0};
    for (int t = 0; t < teammates; ++t) ids.push_back(2 * t + 1);
    for (std::size_t n = 0; n < ids.size(); ++n) {
      u.indiv.push_back(oaht::testing::random_vector(A, rng, 2.0));
      u.factors.push_back(oaht::testing::random_vector(static_cast<std::size_t>(K * A), rng, 2.0));
    }
    const auto g = oaht::graph::build(i % 2 ? Topology::Star : Topology::Complete, 0, ids);
    std::map<AgentId, Vec> pols;
    for (std::size_t n = 1; n < ids.size(); ++n) {
      Vec p = oaht::testing::random_vector(A, rng, 3.0);
      double z = 0.0;
      for (double& x : p) z += (x = std::exp(x));
      for (double& x : p) x /= z;
      pols[ids[n]] = p;
    }
    const auto fast = oaht::value::learner_action_values(u, g, pols);
    std::size_t combos = 1;
    for (int t = 0; t < teammates; ++t) combos *= A;
    double err = 0.0;
    for (int a = 0; a < A; ++a) {
      double expect = 0.0;
      for (std::size_t c = 0; c < combos; ++c) {
        std::map<AgentId, int> joint{{0, a}};
        double p = 1.0;
        std::size_t code = c;
        for (std::size_t n = 1; n < ids.size(); ++n) {
          const int b = static_cast<int>(code % A);
          code /= A;
          joint[ids[n]] = b;
          p *= pols[ids[n]][b];
        }
        // Direct sum over graph pairs and agents, independent of joint_q.
        double q = 0.0;
        for (std::size_t n = 0; n < ids.size(); ++n) q += u.indiv[n][joint[ids[n]]];
        for (const auto& [j, k] : g.unordered_pairs()) {
          double s = 0.0;
          for (int r = 0; r < K; ++r) s += u.factors[j][r * A + joint[ids[j]]] * u.factors[k][r * A + joint[ids[k]]];
          q += u.pair_sign * s;
        }
        expect += p * q;
      }
      err = std::max(err, std::abs(expect - fast[a]));
    }
    worst = std::max(worst, err);
    ok += err <= 1e-10;
  }
  return {ok == kCases, fmt("%d/%d parameterizations, max error %.3g", ok, kCases, worst)};
}

// ---------------------------------------------------------------------------
// Gradients.

constexpr std::size_t kShared = 6;
constexpr int kActions = 5;

oaht::train::TransitionRecord random_record(Topology topology, const std::vector<AgentId>& ids,
                                            const std::vector<AgentId>& next_ids, std::mt19937_64& rng) {
  oaht::train::TransitionRecord r;
  r.obs = oaht::testing::random_obs(ids, kShared, rng);
  r.graph = oaht::graph::build(topology, 0, ids);
  for (AgentId id : ids) r.actions[id] = std::uniform_int_distribution<int>(0, kActions - 1)(rng);
  for (AgentId id : ids) r.value_prev[id] = oaht::testing::random_vector(5, rng);
  r.agent_prev = r.value_prev;
  r.reward = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
  r.next_obs = oaht::testing::random_obs(next_ids, kShared, rng);
  r.next_graph = oaht::graph::build(topology, 0, next_ids);
  for (AgentId id : ids) r.value_next_prev[id] = oaht::testing::random_vector(5, rng);
  r.agent_next_prev = r.value_next_prev;
  return r;
}

Outcome criterion_gradients() {
  using oaht::testing::check_gradients;
  double worst = 0.0;
  std::size_t probes = 0;
  std::string where;
  auto note = [&](const std::string& name, const oaht::testing::GradCheckResult& r) {
    probes += r.checked;
    if (r.max_rel_err >= worst) {
      worst = r.max_rel_err;
      where = name + " " + r.worst;
    }
  };
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    std::mt19937_64 rng(600 + seed);
    const oaht::value::ValueModel value(
        {kShared, oaht::world::kOwnObsDim, 5, 6, kActions, 2, oaht::value::RangeConstraint::Pos,
         oaht::value::RangeConstraint::Pos});
    const oaht::agent::AgentModel agent({kShared, oaht::world::kOwnObsDim, 5, 6, kActions});
    oaht::nn::ParameterStore online, target, agent_params;
    value.init(online, rng);
    value.init(target, rng);
    agent.init(agent_params, rng);
    const auto frozen = online;

    for (auto topology : {Topology::Star, Topology::Complete}) {
      const std::string tname = oaht::graph::to_string(topology);
      std::vector<oaht::train::TransitionRecord> batch{random_record(topology, {0, 1, 2}, {0, 1, 2, 4}, rng),
                                                       random_record(topology, {0, 3}, {0, 3}, rng),
                                                       random_record(topology, {0, 1, 2, 3}, {0, 2}, rng)};
      oaht::train::LossContext ctx;
      ctx.value = &value;
      ctx.agent = &agent;
      ctx.agent_params = &agent_params;
      ctx.target = &target;
      ctx.gamma = 0.9;
      ctx.topology = topology;
      ctx.reg_reference = &frozen;
      std::vector<double> y;
      for (const auto& r : batch) y.push_back(oaht::train::td_target(ctx, r));

      auto run = [&](double lambda, bool acc) {
        auto c = ctx;
        c.lambda = lambda;
        return oaht::train::value_losses(c, online, batch, acc, y);
      };
      note("td_loss/" + tname, check_gradients(online, [&] { return run(0.0, false).td; },
                                               [&] { run(0.0, true); }, 150, rng));
      note("total_loss/" + tname, check_gradients(online, [&] { return run(0.5, false).total; },
                                                  [&] { run(0.5, true); }, 150, rng));
      // Regularizer alone: gradient of (total at lambda 1) minus gradient of td.
      auto reg_grad = [&] {
        run(0.0, true);
        std::map<std::string, std::vector<double>> td_grads;
        for (const auto& n : online.names()) td_grads[n].assign(online.grads(n).begin(), online.grads(n).end());
        online.zero_grad();
        run(1.0, true);
        for (const auto& n : online.names()) {
          auto g = online.grads(n);
          for (std::size_t i = 0; i < g.size(); ++i) g[i] -= td_grads[n][i];
        }
      };
      note("regularizer/" + tname,
           check_gradients(online, [&] { return run(1.0, false).reg; }, reg_grad, 150, rng));

      const auto samples = oaht::train::agent_samples(batch);
      note("agent_model_loss/" + tname,
           check_gradients(
               agent_params, [&] { return oaht::agent::agent_model_loss(agent, agent_params, samples, 0.8, false).loss; },
               [&] { oaht::agent::agent_model_loss(agent, agent_params, samples, 0.8, true); }, 150, rng));
    }
  }
  return {worst <= oaht::testing::kGradRelTol,
          fmt("%zu probes, max relative error %.3g (%s)", probes, worst, where.c_str())};
}

// ---------------------------------------------------------------------------
// Structural constraints on trained checkpoints.

oaht::train::ExperimentConfig short_run(const std::string& preset) {
  auto c = oaht::train::apply_preset({}, preset);
  c.num_envs = 2;
  c.eps_length = 50;
  c.max_num_steps = 150;
  c.embedding_dim = 16;
  c.hidden_dim = 16;
  c.rows = 6;
  c.cols = 6;
  c.lr = 0.01;
  c.seed = 7;
  return c;
}

struct ProbeStats {
  double min_pair = std::numeric_limits<double>::infinity();
  double min_indiv = std::numeric_limits<double>::infinity();
  double max_abs_indiv = 0.0;
  bool transpose_exact = true;
  double max_reg = 0.0;
};

ProbeStats probe(const oaht::train::Trainer& t, int probes, std::mt19937_64& rng) {
  ProbeStats st;
  const auto& vm = t.value_model();
  const std::size_t shared = vm.spec().shared_dim;
  const std::size_t emb = vm.spec().embedding_dim;
  const int A = vm.spec().num_actions;
  for (int p = 0; p < probes; ++p) {
    const int n = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<AgentId> ids{0};
    for (int k = 1; k < n; ++k) ids.push_back(ids.back() + std::uniform_int_distribution<int>(1, 3)(rng));
    const auto topology = p % 2 ? Topology::Star : Topology::Complete;
    const auto g = oaht::graph::build(topology, 0, ids);
    auto obs = oaht::testing::random_obs(ids, shared, rng);
    for (double& x : obs.shared) x = x > 0.0 ? 1.0 : 0.0;
    oaht::agent::EmbeddingTable prev;
    for (AgentId id : ids) {
      if (rng() % 2) prev[id] = oaht::testing::random_vector(emb, rng);
    }
    const auto u = vm.forward(t.online(), prev, obs, g);
    for (const auto& v : u.indiv) {
      for (double x : v) {
        st.min_indiv = std::min(st.min_indiv, x);
        st.max_abs_indiv = std::max(st.max_abs_indiv, std::abs(x));
      }
    }
    for (std::size_t j = 0; j < ids.size(); ++j) {
      for (std::size_t k = 0; k < ids.size(); ++k) {
        if (j == k) continue;
        for (int a = 0; a < A; ++a) {
          for (int b = 0; b < A; ++b) {
            const double q = u.pair(static_cast<int>(j), static_cast<int>(k), a, b);
            st.min_pair = std::min(st.min_pair, q);
            if (q != u.pair(static_cast<int>(k), static_cast<int>(j), b, a)) st.transpose_exact = false;
          }
        }
      }
    }
    oaht::train::TransitionRecord rec;
    rec.obs = obs;
    rec.graph = g;
    rec.value_prev = prev;
    for (AgentId id : ids) rec.actions[id] = std::uniform_int_distribution<int>(0, A - 1)(rng);
    rec.done = true;
    const std::vector<oaht::train::TransitionRecord> batch{rec};
    auto online = t.online();
    for (auto topo : {Topology::Star, Topology::Complete}) {
      auto ctx = t.loss_context();
      ctx.topology = topo;
      st.max_reg = std::max(st.max_reg, oaht::train::regularizer(ctx, online, batch));
    }
  }
  return st;
}

Outcome criterion_structure() {
  constexpr int kProbes = 1000;
  std::mt19937_64 rng(707);
  bool pass = true;
  std::ostringstream out;
  for (const std::string preset : {"ciao-c", "ciao-s"}) {
    oaht::train::Trainer t(short_run(preset));
    while (t.episodes_done() < t.config().num_episodes()) t.train_episode();
    const auto st = probe(t, kProbes, rng);
    const bool ok = st.min_pair >= 0.0 && st.min_indiv >= 0.0 && st.transpose_exact;
    pass = pass && ok;
    out << preset << " min pair " << st.min_pair << " min indiv " << st.min_indiv
        << (st.transpose_exact ? " transpose exact; " : " transpose MISMATCH; ");
  }
  for (const std::string preset : {"ciao-c-zi", "ciao-s-zi"}) {
    oaht::train::Trainer t(short_run(preset));
    while (t.episodes_done() < t.config().num_episodes()) t.train_episode();
    const auto st = probe(t, kProbes, rng);
    const bool ok = st.max_abs_indiv == 0.0 && st.max_reg == 0.0 && st.transpose_exact;
    pass = pass && ok;
    out << preset << " max |indiv| " << st.max_abs_indiv << " max reg " << st.max_reg << "; ";
  }
  return {pass, out.str()};
}

// ---------------------------------------------------------------------------

Outcome criterion_gpl() {
  auto c = short_run("gpl");
  oaht::train::Trainer t(c);
  t.train_episode();
  if (!t.first_update()) return {false, "no update ran"};
  const auto& r = *t.first_update();
  const bool preset_ok = c.lambda == 0.0 && c.topology == Topology::Complete &&
                         c.pair_range == oaht::value::RangeConstraint::Free &&
                         c.indiv_range == oaht::value::RangeConstraint::Free;
  return {preset_ok && r.total == r.td, fmt("total %.17g td %.17g reg %.17g", r.total, r.td, r.reg)};
}

// ---------------------------------------------------------------------------
// Openness protocol.

struct EpisodeLog {
  std::vector<oaht::world::StepOutcome> steps;
};

EpisodeLog run_episode(oaht::world::OpenWorld& env, std::uint64_t seed, std::vector<int>& violations) {
  EpisodeLog log;
  const auto& start = env.reset(seed);
  const int max_agents = env.config().openness.max_agents;
  const auto& cfg = env.config().openness;
  std::map<AgentId, int> since;
  for (AgentId id : start.active()) {
    if (id != 0) since[id] = 0;
  }
  if (static_cast<int>(start.active().size()) > max_agents) ++violations[0];
  std::mt19937_64 learner(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> pick(0, env.num_actions() - 1);
  while (true) {
    auto out = env.step(pick(learner));
    if (static_cast<int>(out.next.active().size()) > max_agents) ++violations[0];
    for (AgentId id : out.left) {
      if (!cfg.active_duration.contains(out.next.t - since.at(id))) ++violations[1];
      since.erase(id);
    }
    for (AgentId id : out.joined) since[id] = out.next.t;
    const bool done = out.done;
    log.steps.push_back(std::move(out));
    if (done) break;
  }
  for (const auto& s : env.openness().samples()) {
    if (s.active && !cfg.active_duration.contains(s.value)) ++violations[1];
    if (!s.active && !cfg.dead_duration.contains(s.value)) ++violations[2];
  }
  return log;
}

Outcome criterion_openness() {
  constexpr int kEpisodes = 10000;
  constexpr int kReplays = 200;
  std::vector<int> violations(4, 0);  // size, active duration, dead duration, replay
  long long steps = 0;
  for (int e = 0; e < kEpisodes; ++e) {
    const auto kind = e % 2 ? oaht::world::EnvKind::Lbf : oaht::world::EnvKind::Wolfpack;
    const int max_agents = 3 + 2 * (e % 4);
    oaht::world::OpenWorld env(oaht::world::WorldConfig::defaults(kind, max_agents));
    const auto seed = static_cast<std::uint64_t>(1000 + e);
    const auto log = run_episode(env, seed, violations);
    steps += static_cast<long long>(log.steps.size());
    if (e < kReplays) {
      oaht::world::OpenWorld again(oaht::world::WorldConfig::defaults(kind, max_agents));
      std::vector<int> ignored(4, 0);
      const auto replay = run_episode(again, seed, ignored);
      bool same = replay.steps.size() == log.steps.size();
      for (std::size_t i = 0; same && i < log.steps.size(); ++i) {
        const auto &a = log.steps[i], &b = replay.steps[i];
        same = a.next == b.next && a.reward == b.reward && a.joined == b.joined && a.left == b.left &&
               a.teammate_actions == b.teammate_actions;
      }
      if (!same) ++violations[3];
    }
  }
  const bool pass = violations[0] == 0 && violations[1] == 0 && violations[2] == 0 && violations[3] == 0;
  return {pass, fmt("%d episodes, %lld steps; violations: team size %d, active duration %d, dead duration %d, "
                    "replay %d/%d",
                    kEpisodes, steps, violations[0], violations[1], violations[2], violations[3], kReplays)};
}

// ---------------------------------------------------------------------------
// Training smoke run.

oaht::train::ExperimentConfig mini_wolfpack() {
  auto c = oaht::train::apply_preset({}, "ciao-c");
  c.env = oaht::world::EnvKind::Wolfpack;
  c.rows = 4;
  c.cols = 4;
  c.num_players_train = 3;
  c.num_players_test = {3};
  c.embedding_dim = 32;
  c.hidden_dim = 32;
  c.max_num_steps = 60000;
  c.saving_frequency = 50;
  c.eval_eps = 5;
  c.seed = 0;
  return c;
}

Outcome criterion_training() {
  const auto t0 = Clock::now();
  const auto cfg = mini_wolfpack();
  oaht::train::Trainer t(cfg);
  std::vector<double> evals;
  oaht::train::EpisodeMetrics last;
  while (t.episodes_done() < cfg.num_episodes()) {
    last = t.train_episode();
    if (last.episode % cfg.saving_frequency == 0) evals.push_back(t.evaluate(3, cfg.eval_eps));
  }
  const double baseline = t.evaluate(3, cfg.eval_eps, oaht::train::EvalPolicy::UniformRandom);
  constexpr std::size_t kFinal = 5;
  const std::size_t n = std::min(kFinal, evals.size());
  double mean = 0.0;
  for (std::size_t i = evals.size() - n; i < evals.size(); ++i) mean += evals[i];
  mean /= static_cast<double>(n);
  const double ratio = mean / baseline;
  const double uniform_nll = std::log(static_cast<double>(cfg.num_actions()));
  const double secs = seconds_since(t0);
  const bool pass = n == kFinal && ratio >= 1.5 && last.agent_nll < uniform_nll && secs <= 1200.0;
  return {pass, fmt("greedy %.2f vs random %.2f (ratio %.3f, need 1.5), agent nll %.3f vs ln|A| %.3f, %.0fs", mean,
                    baseline, ratio, last.agent_nll, uniform_nll, secs)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "Criterion numbers to run (default: all)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion_game_theory}, {2, criterion_bellman},   {3, criterion_factorization}, {4, criterion_dvsc},
      {5, criterion_marginalization}, {6, criterion_gradients}, {7, criterion_structure}, {8, criterion_gpl},
      {9, criterion_openness},    {10, criterion_training}};
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
