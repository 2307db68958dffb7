#include "oaht/value/utility_heads.hpp"

#include "oaht/errors.hpp"

namespace oaht::value {

std::string to_string(RangeConstraint r) {
  switch (r) {
    case RangeConstraint::Free:
      return "free";
    case RangeConstraint::Pos:
      return "pos";
    case RangeConstraint::Neg:
      return "neg";
    case RangeConstraint::Zero:
      return "zero";
  }
  return "free";
}

RangeConstraint parse_range(const std::string& name) {
  for (auto r : {RangeConstraint::Free, RangeConstraint::Pos, RangeConstraint::Neg, RangeConstraint::Zero}) {
    if (to_string(r) == name) return r;
  }
  throw DomainError("unknown range constraint: " + name);
}

namespace {

nn::OutputTransform indiv_transform(RangeConstraint r) {
  switch (r) {
    case RangeConstraint::Free:
      return nn::OutputTransform::None;
    case RangeConstraint::Pos:
      return nn::OutputTransform::NonNegative;
    case RangeConstraint::Neg:
      return nn::OutputTransform::NonPositive;
    case RangeConstraint::Zero:
      return nn::OutputTransform::Zero;
  }
  return nn::OutputTransform::None;
}

// Pos and Neg both use non-negative factors; Neg flips the sign of the product.
nn::OutputTransform factor_transform(RangeConstraint r) {
  switch (r) {
    case RangeConstraint::Free:
      return nn::OutputTransform::None;
    case RangeConstraint::Pos:
    case RangeConstraint::Neg:
      return nn::OutputTransform::NonNegative;
    case RangeConstraint::Zero:
      return nn::OutputTransform::Zero;
  }
  return nn::OutputTransform::None;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

double Utilities::pair(int j, int k, int a, int b) const {
  const Vec& mj = factors[j];
  const Vec& mk = factors[k];
  double s = 0.0;
  for (int r = 0; r < rank; ++r) s += mj[r * num_actions + a] * mk[r * num_actions + b];
  return pair_sign * s;
}

UtilityHeads::UtilityHeads(std::string name, HeadsSpec spec)
    : spec_(spec),
      indiv_(name + ".indiv", nn::NetSpec{{2 * spec.embedding_dim, spec.hidden_dim,
                                           static_cast<std::size_t>(spec.num_actions)},
                                          nn::Activation::ReLU, indiv_transform(spec.indiv_range)}),
      pair_(name + ".pair", nn::NetSpec{{2 * spec.embedding_dim, spec.hidden_dim,
                                         static_cast<std::size_t>(spec.rank * spec.num_actions)},
                                        nn::Activation::ReLU, factor_transform(spec.pair_range)}) {
  if (spec.num_actions < 2) throw DomainError("utility heads need at least two actions");
  if (spec.rank < 1 || spec.rank >= spec.num_actions) throw DomainError("low-rank dimension must satisfy 1 <= K < |A|");
}

void UtilityHeads::init(nn::ParameterStore& store, std::mt19937_64& rng) const {
  indiv_.init(store, rng);
  pair_.init(store, rng);
}

Utilities UtilityHeads::forward(const nn::ParameterStore& store, std::span<const Vec> nodes, Trace* trace) const {
  if (nodes.empty()) throw DomainError("utility heads need at least the learner node");
  Utilities u;
  u.num_actions = spec_.num_actions;
  u.rank = spec_.rank;
  u.pair_sign = spec_.pair_range == RangeConstraint::Neg ? -1.0 : 1.0;
  if (trace) {
    trace->indiv.assign(nodes.size(), {});
    trace->pair.assign(nodes.size(), {});
  }
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const Vec x = concat(nodes[n], nodes[0]);
    u.indiv.push_back(indiv_.forward(store, x, trace ? &trace->indiv[n] : nullptr));
    u.factors.push_back(pair_.forward(store, x, trace ? &trace->pair[n] : nullptr));
  }
  return u;
}

std::vector<Vec> UtilityHeads::backward(nn::ParameterStore& store, const Trace& trace, std::span<const Vec> d_indiv,
                                        std::span<const Vec> d_factors) const {
  if (trace.empty()) throw StateError("utility heads: backward called without a cached forward pass");
  const std::size_t n = trace.indiv.size();
  if (d_indiv.size() != n || d_factors.size() != n) throw DomainError("utility heads: gradient count mismatch");
  const std::size_t e = spec_.embedding_dim;
  std::vector<Vec> d_nodes(n, Vec(e, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    const Vec di = indiv_.backward(store, trace.indiv[k], d_indiv[k]);
    const Vec dp = pair_.backward(store, trace.pair[k], d_factors[k]);
    for (std::size_t i = 0; i < e; ++i) {
      d_nodes[k][i] += di[i] + dp[i];
      d_nodes[0][i] += di[e + i] + dp[e + i];
    }
  }
  return d_nodes;
}

std::map<AgentId, Vec> individual_utilities(const Utilities& u, const graph::DynamicAffinityGraph& g) {
  std::map<AgentId, Vec> out;
  for (std::size_t n = 0; n < g.size(); ++n) out[g.nodes()[n]] = u.indiv.at(n);
  return out;
}

std::map<std::pair<AgentId, AgentId>, Vec> pairwise_utilities(const Utilities& u,
                                                              const graph::DynamicAffinityGraph& g) {
  std::map<std::pair<AgentId, AgentId>, Vec> out;
  const int A = u.num_actions;
  for (const auto& [j, k] : g.unordered_pairs()) {
    Vec m(static_cast<std::size_t>(A * A));
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < A; ++b) m[a * A + b] = u.pair(j, k, a, b);
    }
    out[{g.nodes()[j], g.nodes()[k]}] = std::move(m);
  }
  return out;
}

namespace {

std::vector<int> actions_by_node(const Utilities& u, const graph::DynamicAffinityGraph& g,
                                 const std::map<AgentId, int>& joint_action) {
  std::vector<int> a(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    auto it = joint_action.find(g.nodes()[n]);
    if (it == joint_action.end()) throw DomainError("joint action is missing agent " + std::to_string(g.nodes()[n]));
    if (it->second < 0 || it->second >= u.num_actions) throw DomainError("joint action out of range");
    a[n] = it->second;
  }
  return a;
}

}  // namespace

JointQBreakdown joint_q(const Utilities& u, const graph::DynamicAffinityGraph& g,
                        const std::map<AgentId, int>& joint_action) {
  const auto a = actions_by_node(u, g, joint_action);
  JointQBreakdown out;
  for (const auto& [j, k] : g.unordered_pairs()) {
    const double q = u.pair(j, k, a[j], a[k]);
    out.pairwise[{g.nodes()[j], g.nodes()[k]}] = q;
    out.total += q;
  }
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double q = u.indiv[n][a[n]];
    out.individual[g.nodes()[n]] = q;
    out.total += q;
  }
  return out;
}

void joint_q_backward(const Utilities& u, const graph::DynamicAffinityGraph& g,
                      const std::map<AgentId, int>& joint_action, double scale, std::vector<Vec>& d_indiv,
                      std::vector<Vec>& d_factors) {
  const auto a = actions_by_node(u, g, joint_action);
  const int A = u.num_actions;
  for (std::size_t n = 0; n < g.size(); ++n) d_indiv[n][a[n]] += scale;
  for (const auto& [j, k] : g.unordered_pairs()) {
    for (int r = 0; r < u.rank; ++r) {
      d_factors[j][r * A + a[j]] += scale * u.pair_sign * u.factors[k][r * A + a[k]];
      d_factors[k][r * A + a[k]] += scale * u.pair_sign * u.factors[j][r * A + a[j]];
    }
  }
}

Vec learner_action_values(const Utilities& u, const graph::DynamicAffinityGraph& g,
                          const std::map<AgentId, Vec>& teammate_policies) {
  const int A = u.num_actions;
  const int K = u.rank;
  const std::size_t n = g.size();
  std::vector<Vec> mbar(n, Vec(K, 0.0));
  double constant = 0.0;
  for (std::size_t node = 1; node < n; ++node) {
    auto it = teammate_policies.find(g.nodes()[node]);
    if (it == teammate_policies.end()) {
      throw DomainError("no policy estimate for teammate " + std::to_string(g.nodes()[node]));
    }
    const Vec& q = it->second;
    if (static_cast<int>(q.size()) != A) throw DomainError("policy estimate has the wrong action count");
    for (int b = 0; b < A; ++b) {
      constant += q[b] * u.indiv[node][b];
      for (int r = 0; r < K; ++r) mbar[node][r] += u.factors[node][r * A + b] * q[b];
    }
  }
  Vec values(A, 0.0);
  for (const auto& [j, k] : g.unordered_pairs()) {
    if (j == 0) {
      for (int a = 0; a < A; ++a) {
        double s = 0.0;
        for (int r = 0; r < K; ++r) s += u.factors[0][r * A + a] * mbar[k][r];
        values[a] += u.pair_sign * s;
      }
    } else {
      double s = 0.0;
      for (int r = 0; r < K; ++r) s += mbar[j][r] * mbar[k][r];
      constant += u.pair_sign * s;
    }
  }
  for (int a = 0; a < A; ++a) values[a] += u.indiv[0][a] + constant;
  return values;
}

}  // namespace oaht::value
