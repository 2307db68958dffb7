#pragma once

#include <random>
#include <span>

#include "oaht/agent/embeddings.hpp"
#include "oaht/value/utility_heads.hpp"

namespace oaht::value {

struct ValueModelSpec {
  std::size_t shared_dim = 0;
  std::size_t own_dim = world::kOwnObsDim;
  std::size_t embedding_dim = 64;
  std::size_t hidden_dim = 64;
  int num_actions = 5;
  int rank = 3;
  RangeConstraint pair_range = RangeConstraint::Free;
  RangeConstraint indiv_range = RangeConstraint::Free;
};

// Joint action-value network: its own recurrent type encoder followed by the
// individual and pairwise utility heads. Parameters live under "value.".
class ValueModel {
 public:
  struct Trace {
    agent::TypeEncoder::Trace encoder;
    UtilityHeads::Trace heads;
  };

  explicit ValueModel(ValueModelSpec spec);

  const ValueModelSpec& spec() const { return spec_; }
  const agent::TypeEncoder& encoder() const { return encoder_; }
  const UtilityHeads& heads() const { return heads_; }
  void init(nn::ParameterStore& store, std::mt19937_64& rng) const;

  // Requires obs.ids to list the graph nodes in node order.
  Utilities forward(const nn::ParameterStore& store, const agent::EmbeddingTable& prev, const world::ObsBatch& obs,
                    const graph::DynamicAffinityGraph& g, agent::EmbeddingTable* next = nullptr,
                    Trace* trace = nullptr) const;
  void backward(nn::ParameterStore& store, const Trace& trace, std::span<const Vec> d_indiv,
                std::span<const Vec> d_factors) const;

 private:
  ValueModelSpec spec_;
  agent::TypeEncoder encoder_;
  UtilityHeads heads_;
};

}  // namespace oaht::value
