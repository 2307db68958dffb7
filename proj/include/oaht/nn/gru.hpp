#pragma once

#include <random>
#include <span>
#include <string>

#include "oaht/nn/parameter_store.hpp"

namespace oaht::nn {

// Gated recurrent cell with update and reset gates:
//   r  = sigmoid(Wx_r x + bx_r + Wh_r h + bh_r)
//   z  = sigmoid(Wx_z x + bx_z + Wh_z h + bh_z)
//   n  = tanh(Wx_n x + bx_n + r * (Wh_n h + bh_n))
//   h' = (1 - z) * n + z * h
// The input is split into a shared block (identical for every agent in a
// snapshot) and a per-agent block, so the shared projection Wx_shared x_shared
// can be computed once per snapshot. Gate blocks are stacked [r; z; n].
class GruCell {
 public:
  struct Trace {
    Vec own, h, r, z, n, hn;  // hn = Wh_n h + bh_n
    bool empty() const { return r.empty(); }
  };
  struct Grad {
    Vec d_shared_proj;  // gradient w.r.t. the 3H shared projection
    Vec d_own;
    Vec d_h;
  };

  GruCell() = default;
  GruCell(std::string name, std::size_t shared_dim, std::size_t own_dim, std::size_t hidden_dim);

  std::size_t shared_dim() const { return shared_dim_; }
  std::size_t own_dim() const { return own_dim_; }
  std::size_t input_dim() const { return shared_dim_ + own_dim_; }
  std::size_t hidden_dim() const { return hidden_; }

  void init(ParameterStore& store, std::mt19937_64& rng) const;

  Vec project_shared(const ParameterStore& store, std::span<const double> shared) const;
  Vec step(const ParameterStore& store, std::span<const double> shared_proj, std::span<const double> own,
           std::span<const double> h, Trace* trace = nullptr) const;
  // Convenience path for an unsplit input x = shared ++ own.
  Vec forward(const ParameterStore& store, std::span<const double> x, std::span<const double> h,
              Trace* trace = nullptr) const;

  // Accumulates gradients of every parameter except the shared input weights.
  Grad backward(ParameterStore& store, const Trace& trace, std::span<const double> dh_next) const;
  // Accumulates the shared input weight gradient for a (summed) shared projection gradient.
  void backward_shared(ParameterStore& store, std::span<const double> d_shared_proj,
                       std::span<const double> shared) const;

 private:
  std::string name_;
  std::size_t shared_dim_ = 0;
  std::size_t own_dim_ = 0;
  std::size_t hidden_ = 0;
  std::string ws_, wo_, bx_, wh_, bh_;
};

}  // namespace oaht::nn
