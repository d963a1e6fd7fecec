/* Copyright 2026 The newsrec Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include "newsrec/attention.hpp"

#include <cmath>

namespace newsrec {

using namespace ops;

TensorPtr affine(const TensorPtr& x, const TensorPtr& w, const TensorPtr& b) {
  return add_row_broadcast(matmul(x, w), b);
}

TensorPtr scaled_dot_attention(const TensorPtr& q, const TensorPtr& k,
                               const TensorPtr& v, const Mask* key_mask) {
  if (q->cols() != k->cols())
    throw ShapeError("scaled_dot_attention: query/key widths disagree");
  if (k->rows() != v->rows())
    throw ShapeError("scaled_dot_attention: key/value row counts disagree");
  if (q->cols() < 1) throw ShapeError("scaled_dot_attention: d_k must be >= 1");
  const Real inv_sqrt_dk =
      Real(1) / std::sqrt(static_cast<Real>(q->cols()));
  auto logits = scale(matmul(q, transpose(k)), inv_sqrt_dk);
  auto weights = row_softmax(logits, key_mask);
  return matmul(weights, v);
}

AttentionParams AttentionParams::create(ParameterStore& store,
                                        const std::string& prefix, int dim,
                                        Rng& rng) {
  using Init = ParameterStore::Init;
  AttentionParams p;
  p.wq = store.create(prefix + ".wq", dim, dim, Init::XavierUniform, rng);
  p.wk = store.create(prefix + ".wk", dim, dim, Init::XavierUniform, rng);
  p.wv = store.create(prefix + ".wv", dim, dim, Init::XavierUniform, rng);
  p.wo = store.create(prefix + ".wo", dim, dim, Init::XavierUniform, rng);
  return p;
}

TensorPtr multi_head_attention(const TensorPtr& q, const TensorPtr& k,
                               const TensorPtr& v, const AttentionParams& p,
                               int n_heads, const Mask* key_mask) {
  const int dim = p.wq->rows();
  if (n_heads < 1 || dim % n_heads != 0)
    throw ConfigError("multi_head_attention: model dim " +
                      std::to_string(dim) + " not divisible by " +
                      std::to_string(n_heads) + " heads");
  auto qp = matmul(q, p.wq);
  auto kp = matmul(k, p.wk);
  auto vp = matmul(v, p.wv);
  const int dk = dim / n_heads;
  std::vector<TensorPtr> heads;
  heads.reserve(n_heads);
  for (int h = 0; h < n_heads; ++h) {
    const int lo = h * dk, hi = (h + 1) * dk;
    heads.push_back(scaled_dot_attention(slice_cols(qp, lo, hi),
                                         slice_cols(kp, lo, hi),
                                         slice_cols(vp, lo, hi), key_mask));
  }
  return matmul(concat_cols(heads), p.wo);
}

PoolParams PoolParams::create(ParameterStore& store, const std::string& prefix,
                              int dim, int hidden, Rng& rng) {
  using Init = ParameterStore::Init;
  PoolParams p;
  p.w1 = store.create(prefix + ".w1", dim, hidden, Init::XavierUniform, rng);
  p.b1 = store.create(prefix + ".b1", 1, hidden, Init::Zero, rng);
  p.w2 = store.create(prefix + ".w2", hidden, 1, Init::XavierUniform, rng);
  p.b2 = store.create(prefix + ".b2", 1, 1, Init::Zero, rng);
  return p;
}

TensorPtr additive_attention_pool(const TensorPtr& x, const PoolParams& p,
                                  const Mask* row_mask) {
  if (x->rows() < 1)
    throw ShapeError("additive_attention_pool: need at least one row");
  auto scores = affine(tanh_(affine(x, p.w1, p.b1)), p.w2, p.b2);  // m x 1
  auto weights = row_softmax(transpose(scores), row_mask);         // 1 x m
  return matmul(weights, x);                                       // 1 x d
}

LayerNormParams LayerNormParams::create(ParameterStore& store,
                                        const std::string& prefix, int dim,
                                        bool learnable, Rng& rng) {
  using Init = ParameterStore::Init;
  LayerNormParams p;
  if (learnable) {
    p.gain = store.create(prefix + ".gain", 1, dim, Init::One, rng);
    p.bias = store.create(prefix + ".bias", 1, dim, Init::Zero, rng);
  }
  return p;
}

TensorPtr layer_norm_affine(const TensorPtr& x, const LayerNormParams& p,
                            Real eps) {
  auto y = layer_norm_rows(x, eps);
  if (p.gain) y = add_row_broadcast(mul_row_broadcast(y, p.gain), p.bias);
  return y;
}

TensorPtr residual_layer_norm(const TensorPtr& x, const TensorPtr& delta,
                              const LayerNormParams& p, Real eps) {
  return layer_norm_affine(add(x, delta), p, eps);
}

TransformerLayerParams TransformerLayerParams::create(
    ParameterStore& store, const std::string& prefix, int dim, int ffn_hidden,
    bool ln_learnable, Rng& rng) {
  using Init = ParameterStore::Init;
  TransformerLayerParams p;
  p.attn = AttentionParams::create(store, prefix + ".attn", dim, rng);
  p.ln1 = LayerNormParams::create(store, prefix + ".ln1", dim, ln_learnable,
                                  rng);
  p.ln2 = LayerNormParams::create(store, prefix + ".ln2", dim, ln_learnable,
                                  rng);
  p.ffn_w1 = store.create(prefix + ".ffn.w1", dim, ffn_hidden,
                          Init::XavierUniform, rng);
  p.ffn_b1 = store.create(prefix + ".ffn.b1", 1, ffn_hidden, Init::Zero, rng);
  p.ffn_w2 = store.create(prefix + ".ffn.w2", ffn_hidden, dim,
                          Init::XavierUniform, rng);
  p.ffn_b2 = store.create(prefix + ".ffn.b2", 1, dim, Init::Zero, rng);
  return p;
}

TensorPtr transformer_layer(const TensorPtr& x,
                            const TransformerLayerParams& p, int n_heads,
                            Real ln_eps, Real dropout_rate, bool train,
                            Rng& rng, const Mask* mask) {
  auto attended = multi_head_attention(x, x, x, p.attn, n_heads, mask);
  attended = ops::dropout(attended, dropout_rate, train, rng);
  auto normed = residual_layer_norm(x, attended, p.ln1, ln_eps);
  auto hidden = relu_(affine(normed, p.ffn_w1, p.ffn_b1));
  auto ff = affine(hidden, p.ffn_w2, p.ffn_b2);
  ff = ops::dropout(ff, dropout_rate, train, rng);
  return residual_layer_norm(normed, ff, p.ln2, ln_eps);
}

}  // namespace newsrec
