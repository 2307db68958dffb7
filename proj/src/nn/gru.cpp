#include "oaht/nn/gru.hpp"

#include <cmath>

#include "oaht/errors.hpp"
#include "oaht/nn/linalg.hpp"
#include "oaht/nn/mlp.hpp"

namespace oaht::nn {

using linalg::mat;
using linalg::vec;

GruCell::GruCell(std::string name, std::size_t shared_dim, std::size_t own_dim, std::size_t hidden_dim)
    : name_(std::move(name)),
      shared_dim_(shared_dim),
      own_dim_(own_dim),
      hidden_(hidden_dim),
      ws_(name_ + ".Wx_shared"),
      wo_(name_ + ".Wx_own"),
      bx_(name_ + ".bx"),
      wh_(name_ + ".Wh"),
      bh_(name_ + ".bh") {
  if (hidden_ < 1) throw DomainError("GRU hidden width must be >= 1");
  if (shared_dim_ + own_dim_ < 1) throw DomainError("GRU input width must be >= 1");
}

void GruCell::init(ParameterStore& store, std::mt19937_64& rng) const {
  const std::size_t g = 3 * hidden_;
  store.add(ws_, {g, shared_dim_});
  store.add(wo_, {g, own_dim_});
  store.add(bx_, {g});
  store.add(wh_, {g, hidden_});
  store.add(bh_, {g});
  glorot_uniform(store.values(ws_), input_dim(), hidden_, rng);
  glorot_uniform(store.values(wo_), input_dim(), hidden_, rng);
  glorot_uniform(store.values(wh_), hidden_, hidden_, rng);
}

Vec GruCell::project_shared(const ParameterStore& store, std::span<const double> shared) const {
  if (shared.size() != shared_dim_) throw DomainError("GRU: shared input width mismatch");
  Vec out(3 * hidden_, 0.0);
  if (shared_dim_ > 0) {
    vec(std::span<double>(out)).noalias() = mat(store.values(ws_), 3 * hidden_, shared_dim_) * vec(shared);
  }
  return out;
}

Vec GruCell::step(const ParameterStore& store, std::span<const double> shared_proj, std::span<const double> own,
                  std::span<const double> h, Trace* trace) const {
  const std::size_t H = hidden_;
  if (shared_proj.size() != 3 * H) throw DomainError("GRU: shared projection width mismatch");
  if (own.size() != own_dim_) throw DomainError("GRU: own input width mismatch");
  if (h.size() != H) throw DomainError("GRU: hidden width mismatch");

  Eigen::VectorXd gx = vec(shared_proj) + vec(store.values(bx_));
  if (own_dim_ > 0) gx.noalias() += mat(store.values(wo_), 3 * H, own_dim_) * vec(own);
  Eigen::VectorXd gh = vec(store.values(bh_));
  gh.noalias() += mat(store.values(wh_), 3 * H, H) * vec(h);

  Vec r(H), z(H), n(H), hn(H), out(H);
  for (std::size_t i = 0; i < H; ++i) {
    r[i] = sigmoid(gx[i] + gh[i]);
    z[i] = sigmoid(gx[H + i] + gh[H + i]);
    hn[i] = gh[2 * H + i];
    n[i] = std::tanh(gx[2 * H + i] + r[i] * hn[i]);
    out[i] = (1.0 - z[i]) * n[i] + z[i] * h[i];
  }
  if (trace) {
    trace->own.assign(own.begin(), own.end());
    trace->h.assign(h.begin(), h.end());
    trace->r = std::move(r);
    trace->z = std::move(z);
    trace->n = std::move(n);
    trace->hn = std::move(hn);
  }
  return out;
}

Vec GruCell::forward(const ParameterStore& store, std::span<const double> x, std::span<const double> h,
                     Trace* trace) const {
  if (x.size() != input_dim()) throw DomainError("GRU: input width mismatch");
  const Vec proj = project_shared(store, x.first(shared_dim_));
  return step(store, proj, x.subspan(shared_dim_), h, trace);
}

GruCell::Grad GruCell::backward(ParameterStore& store, const Trace& t, std::span<const double> dh_next) const {
  if (t.empty()) throw StateError("GRU: backward called without a cached forward pass");
  const std::size_t H = hidden_;
  if (dh_next.size() != H) throw DomainError("GRU: upstream gradient width mismatch");

  Eigen::VectorXd dgx(3 * H), dgh(3 * H);
  Grad g;
  g.d_h.resize(H);
  for (std::size_t i = 0; i < H; ++i) {
    const double dn = dh_next[i] * (1.0 - t.z[i]);
    const double dz = dh_next[i] * (t.h[i] - t.n[i]);
    g.d_h[i] = dh_next[i] * t.z[i];
    const double dpre_n = dn * (1.0 - t.n[i] * t.n[i]);
    const double dhn = dpre_n * t.r[i];
    const double dr = dpre_n * t.hn[i];
    const double dpre_r = dr * t.r[i] * (1.0 - t.r[i]);
    const double dpre_z = dz * t.z[i] * (1.0 - t.z[i]);
    dgx[i] = dpre_r;
    dgx[H + i] = dpre_z;
    dgx[2 * H + i] = dpre_n;
    dgh[i] = dpre_r;
    dgh[H + i] = dpre_z;
    dgh[2 * H + i] = dhn;
  }

  vec(store.grads(bx_)) += dgx;
  vec(store.grads(bh_)) += dgh;
  mat(store.grads(wh_), 3 * H, H).noalias() += dgh * vec(std::span<const double>(t.h)).transpose();
  vec(std::span<double>(g.d_h)).noalias() += mat(store.values(wh_), 3 * H, H).transpose() * dgh;

  g.d_own.assign(own_dim_, 0.0);
  if (own_dim_ > 0) {
    mat(store.grads(wo_), 3 * H, own_dim_).noalias() += dgx * vec(std::span<const double>(t.own)).transpose();
    vec(std::span<double>(g.d_own)).noalias() = mat(store.values(wo_), 3 * H, own_dim_).transpose() * dgx;
  }
  g.d_shared_proj.assign(dgx.data(), dgx.data() + dgx.size());
  return g;
}

void GruCell::backward_shared(ParameterStore& store, std::span<const double> d_shared_proj,
                              std::span<const double> shared) const {
  if (shared_dim_ == 0) return;
  if (shared.size() != shared_dim_ || d_shared_proj.size() != 3 * hidden_) {
    throw DomainError("GRU: shared gradient width mismatch");
  }
  mat(store.grads(ws_), 3 * hidden_, shared_dim_).noalias() += vec(d_shared_proj) * vec(shared).transpose();
}

}  // namespace oaht::nn
