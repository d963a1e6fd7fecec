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

#include <vector>

#include "newsrec/tensor.hpp"

namespace newsrec {

// 1 = valid position, 0 = padded/ignored.
using Mask = std::vector<uint8_t>;

namespace ops {

// Elementwise.
TensorPtr add(const TensorPtr& a, const TensorPtr& b);
TensorPtr sub(const TensorPtr& a, const TensorPtr& b);
TensorPtr mul(const TensorPtr& a, const TensorPtr& b);
TensorPtr add_n(const std::vector<TensorPtr>& xs);
TensorPtr scale(const TensorPtr& a, Real s);
TensorPtr add_const(const TensorPtr& a, Real s);
TensorPtr neg(const TensorPtr& a);
TensorPtr tanh_(const TensorPtr& a);
TensorPtr sigmoid_(const TensorPtr& a);
TensorPtr relu_(const TensorPtr& a);

// Linear algebra.
TensorPtr matmul(const TensorPtr& a, const TensorPtr& b);
TensorPtr transpose(const TensorPtr& a);

// Broadcasting over rows: `row` is 1 x c.
TensorPtr add_row_broadcast(const TensorPtr& a, const TensorPtr& row);
TensorPtr mul_row_broadcast(const TensorPtr& a, const TensorPtr& row);

// Multiply every entry by a 1x1 graph node.
TensorPtr mul_scalar_node(const TensorPtr& a, const TensorPtr& s);

// Layout.
TensorPtr concat_cols(const std::vector<TensorPtr>& xs);
TensorPtr slice_cols(const TensorPtr& a, int lo, int hi);
TensorPtr stack_rows(const std::vector<TensorPtr>& rows);
TensorPtr slice_row(const TensorPtr& a, int row);
TensorPtr gather_rows(const TensorPtr& table, const std::vector<int>& idx);

// Reductions.
TensorPtr sum_all(const TensorPtr& a);
TensorPtr mean_all(const TensorPtr& a);

// Row-wise softmax; masked columns get zero weight. Each unmasked row sums
// to 1.
TensorPtr row_softmax(const TensorPtr& a, const Mask* valid_cols = nullptr);
TensorPtr log_softmax_rows(const TensorPtr& a);

// Per-row standardization: subtract row mean, divide by sqrt(var + eps).
// No learnable affine here; compose with mul/add_row_broadcast for that.
TensorPtr layer_norm_rows(const TensorPtr& a, Real eps);

// Rows scaled to unit L2 norm. Throws NumericError naming the row if a row
// has (near-)zero norm.
TensorPtr row_l2_normalize(const TensorPtr& a);

// Inverted dropout: train mode zeroes entries with probability `rate` and
// scales survivors by 1/(1-rate); eval mode is the identity.
TensorPtr dropout(const TensorPtr& a, Real rate, bool train, Rng& rng);

// Sinusoidal position table, constant (no gradient). `dim` must be even.
TensorPtr sinusoidal_pe(int count, int dim);

}  // namespace ops
}  // namespace newsrec
