#pragma once

#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oaht/graph/dynamic_graph.hpp"
#include "oaht/nn/mlp.hpp"

namespace oaht::value {

using nn::Vec;

enum class RangeConstraint { Free, Pos, Neg, Zero };
std::string to_string(RangeConstraint r);
RangeConstraint parse_range(const std::string& name);

struct HeadsSpec {
  std::size_t embedding_dim = 64;
  std::size_t hidden_dim = 64;
  int num_actions = 5;
  int rank = 3;  // K, must satisfy 1 <= K < num_actions
  RangeConstraint pair_range = RangeConstraint::Free;
  RangeConstraint indiv_range = RangeConstraint::Free;
};

// Head outputs for one graph, indexed by node. factors[n] is the K x |A|
// row-major factor matrix M_n after the range transform.
struct Utilities {
  std::vector<Vec> indiv;
  std::vector<Vec> factors;
  int num_actions = 0;
  int rank = 0;
  double pair_sign = 1.0;  // -1 for the Neg pair range

  // Q_jk(a, b) = sign * sum_r M_j[r, a] M_k[r, b].
  double pair(int j, int k, int a, int b) const;
};

struct JointQBreakdown {
  std::map<AgentId, double> individual;
  std::map<std::pair<AgentId, AgentId>, double> pairwise;  // key (j, k) with j listed first in node order
  double total = 0.0;
};

// Individual utility head MLP_beta(theta_j ++ theta_i) -> R^|A| and pairwise
// factor head MLP_delta(theta_j ++ theta_i) -> R^{K x |A|}, shared across
// agents. Parameters live under "<name>.indiv" and "<name>.pair".
class UtilityHeads {
 public:
  struct Trace {
    std::vector<nn::Mlp::Trace> indiv;
    std::vector<nn::Mlp::Trace> pair;
    bool empty() const { return indiv.empty(); }
  };

  UtilityHeads() = default;
  UtilityHeads(std::string name, HeadsSpec spec);

  const HeadsSpec& spec() const { return spec_; }
  const nn::Mlp& indiv_net() const { return indiv_; }
  const nn::Mlp& pair_net() const { return pair_; }
  void init(nn::ParameterStore& store, std::mt19937_64& rng) const;

  // nodes are embeddings in graph node order; node 0 is the learner.
  Utilities forward(const nn::ParameterStore& store, std::span<const Vec> nodes, Trace* trace = nullptr) const;
  // Gradients w.r.t. transformed utilities and factors; returns d / d node embedding.
  std::vector<Vec> backward(nn::ParameterStore& store, const Trace& trace, std::span<const Vec> d_indiv,
                            std::span<const Vec> d_factors) const;

 private:
  HeadsSpec spec_;
  nn::Mlp indiv_;
  nn::Mlp pair_;
};

std::map<AgentId, Vec> individual_utilities(const Utilities& u, const graph::DynamicAffinityGraph& g);
// Full |A| x |A| row-major matrices for each unordered graph pair (j, k) in node order.
std::map<std::pair<AgentId, AgentId>, Vec> pairwise_utilities(const Utilities& u,
                                                              const graph::DynamicAffinityGraph& g);

// Sum over unordered graph pairs plus sum over agents at a joint action.
JointQBreakdown joint_q(const Utilities& u, const graph::DynamicAffinityGraph& g,
                        const std::map<AgentId, int>& joint_action);

// Gradient of joint_q's total w.r.t. indiv and factors, scaled by `scale`.
void joint_q_backward(const Utilities& u, const graph::DynamicAffinityGraph& g,
                      const std::map<AgentId, int>& joint_action, double scale, std::vector<Vec>& d_indiv,
                      std::vector<Vec>& d_factors);

// E_{a^{-i} ~ prod_j q_j}[joint_q(a^i, a^{-i})] for each learner action, in
// factorized closed form.
Vec learner_action_values(const Utilities& u, const graph::DynamicAffinityGraph& g,
                          const std::map<AgentId, Vec>& teammate_policies);

}  // namespace oaht::value
