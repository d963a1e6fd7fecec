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

#include <functional>
#include <vector>

#include "newsrec/config.hpp"
#include "newsrec/news_encoder.hpp"
#include "newsrec/optimizer.hpp"

namespace newsrec {

// In-batch contrastive loss over cosine similarities: row i of `anchors`
// pairs with row i of `targets`; all other rows are negatives. Mean over
// the batch.
TensorPtr info_nce(const TensorPtr& anchors, const TensorPtr& targets,
                   Real tau);

// Dropout-perturbed copy used as the contrastive positive ("mirror").
// Every entry is masked independently with a fresh draw from `rng`.
TensorPtr mirror_batch(const TensorPtr& x, Real rate, Rng& rng);

struct ContrastiveParts {
  TensorPtr total;
  Real et = 0, tt = 0, ee = 0;  // component values for logging
};

// alpha * L(e,h) + beta * L(h,h+) + delta * L(e,e+). Mirrors are drawn
// inside. Components with zero weight are still evaluated (forward only)
// so logs stay comparable across ablations.
ContrastiveParts combined_loss(const TensorPtr& e_batch,
                               const TensorPtr& h_batch,
                               const PretrainConfig& cfg, Rng& rng);

struct PretrainStepLog {
  int64_t step = 0;
  int epoch = 0;
  Real loss = 0, et = 0, tt = 0, ee = 0;
  Real lr_title = 0, lr_other = 0;
  double wall_s = 0;
};

struct PretrainResult {
  int64_t steps = 0;
  std::vector<PretrainStepLog> log;
};

// Stage 1: shuffled mini-batches of articles per epoch; trains the news
// encoder (title stack, entity stack, memory, both projections) in place.
// The caller exports the checkpoint afterwards.
PretrainResult pretrain(
    const std::vector<NewsArticle>& corpus, const RunConfig& cfg,
    NewsEncoder& encoder, ParameterStore& params,
    const std::function<void(const PretrainStepLog&)>& on_step = {});

}  // namespace newsrec
