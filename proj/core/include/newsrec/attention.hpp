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

#pragma once

#include <string>

#include "newsrec/ops.hpp"
#include "newsrec/tensor.hpp"

namespace newsrec {

// x @ w + b (b broadcast over rows).
TensorPtr affine(const TensorPtr& x, const TensorPtr& w, const TensorPtr& b);

// softmax(Q K^T / sqrt(d_k)) V. Masked key rows get zero weight.
TensorPtr scaled_dot_attention(const TensorPtr& q, const TensorPtr& k,
                               const TensorPtr& v,
                               const Mask* key_mask = nullptr);

// Fused per-head projections: wq/wk/wv/wo are dim x dim; head h reads
// column block [h*dk, (h+1)*dk).
struct AttentionParams {
  TensorPtr wq, wk, wv, wo;
  static AttentionParams create(ParameterStore& store,
                                const std::string& prefix, int dim, Rng& rng);
};

TensorPtr multi_head_attention(const TensorPtr& q, const TensorPtr& k,
                               const TensorPtr& v, const AttentionParams& p,
                               int n_heads, const Mask* key_mask = nullptr);

// Additive attention pooling: scores W2 tanh(W1 x + b1) + b2, softmax over
// rows, weighted sum. Output is 1 x d.
struct PoolParams {
  TensorPtr w1, b1, w2, b2;
  static PoolParams create(ParameterStore& store, const std::string& prefix,
                           int dim, int hidden, Rng& rng);
};

TensorPtr additive_attention_pool(const TensorPtr& x, const PoolParams& p,
                                  const Mask* row_mask = nullptr);

// Optional learnable gain/bias on top of plain row standardization. The
// plain form (learnable=false) matches the textbook layer norm used by the
// oracle tests.
struct LayerNormParams {
  TensorPtr gain, bias;  // null when not learnable
  static LayerNormParams create(ParameterStore& store,
                                const std::string& prefix, int dim,
                                bool learnable, Rng& rng);
};

TensorPtr layer_norm_affine(const TensorPtr& x, const LayerNormParams& p,
                            Real eps);

// layernorm(x + delta), the residual link.
TensorPtr residual_layer_norm(const TensorPtr& x, const TensorPtr& delta,
                              const LayerNormParams& p, Real eps);

// Post-norm transformer encoder layer: self-attention + residual norm,
// then a ReLU feed-forward + residual norm.
struct TransformerLayerParams {
  AttentionParams attn;
  LayerNormParams ln1, ln2;
  TensorPtr ffn_w1, ffn_b1, ffn_w2, ffn_b2;
  static TransformerLayerParams create(ParameterStore& store,
                                       const std::string& prefix, int dim,
                                       int ffn_hidden, bool ln_learnable,
                                       Rng& rng);
};

TensorPtr transformer_layer(const TensorPtr& x,
                            const TransformerLayerParams& p, int n_heads,
                            Real ln_eps, Real dropout_rate, bool train,
                            Rng& rng, const Mask* mask = nullptr);

}  // namespace newsrec
