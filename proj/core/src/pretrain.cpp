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

#include "newsrec/pretrain.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace newsrec {

using namespace ops;

TensorPtr info_nce(const TensorPtr& anchors, const TensorPtr& targets,
                   Real tau) {
  if (tau <= 0) throw ConfigError("info_nce: temperature must be positive");
  if (anchors->rows() < 2)
    throw UsageError("info_nce: need at least two rows for in-batch negatives");
  if (!anchors->same_shape(*targets))
    throw ShapeError("info_nce: anchor/target shapes disagree");
  const int v = anchors->rows();
  auto sims = matmul(row_l2_normalize(anchors),
                     transpose(row_l2_normalize(targets)));  // v x v cosines
  auto log_probs = log_softmax_rows(scale(sims, Real(1) / tau));
  auto diag = Tensor::make(v, v);  // constant selector, no gradient
  for (int i = 0; i < v; ++i) diag->at(i, i) = 1;
  return scale(sum_all(mul(log_probs, diag)), Real(-1) / static_cast<Real>(v));
}

TensorPtr mirror_batch(const TensorPtr& x, Real rate, Rng& rng) {
  return ops::dropout(x, rate, /*train=*/true, rng);
}

ContrastiveParts combined_loss(const TensorPtr& e_batch,
                               const TensorPtr& h_batch,
                               const PretrainConfig& cfg, Rng& rng) {
  if (e_batch->rows() != h_batch->rows())
    throw ShapeError("combined_loss: batches are not aligned");
  Real alpha = cfg.alpha, beta = cfg.beta, delta = cfg.delta;
  if (cfg.normalize_weights) {
    const Real sum = alpha + beta + delta;
    if (sum <= 0)
      throw ConfigError("combined_loss: cannot normalize zero weights");
    alpha /= sum;
    beta /= sum;
    delta /= sum;
  }

  ContrastiveParts parts;
  auto h_mirror = mirror_batch(h_batch, cfg.mirror_dropout, rng);
  auto e_mirror = mirror_batch(e_batch, cfg.mirror_dropout, rng);

  std::vector<TensorPtr> terms;
  auto component = [&terms](Real weight, const TensorPtr& a,
                            const TensorPtr& b, Real tau) -> Real {
    if (weight != 0) {
      auto l = info_nce(a, b, tau);
      terms.push_back(scale(l, weight));
      return l->item();
    }
    NoGradGuard ng;  // log the value without paying for its gradient
    return info_nce(a, b, tau)->item();
  };
  parts.et = component(alpha, e_batch, h_batch, cfg.tau_et);
  parts.tt = component(beta, h_batch, h_mirror, cfg.tau_tt);
  parts.ee = component(delta, e_batch, e_mirror, cfg.tau_ee);

  parts.total = terms.empty() ? Tensor::scalar(0) : add_n(terms);
  return parts;
}

PretrainResult pretrain(
    const std::vector<NewsArticle>& corpus, const RunConfig& cfg,
    NewsEncoder& encoder, ParameterStore& params,
    const std::function<void(const PretrainStepLog&)>& on_step) {
  if (corpus.empty()) throw UsageError("pretrain: empty corpus");
  const auto& pc = cfg.pretrain;
  const int n = static_cast<int>(corpus.size());
  const int batches_per_epoch = (n + pc.batch_size - 1) / pc.batch_size;
  const int64_t total_steps =
      std::max<int64_t>(1, int64_t(pc.epochs) * batches_per_epoch);

  OptimizerConfig oc = cfg.optim;
  oc.total_steps = total_steps;
  AdamW opt(params, oc);

  PretrainResult result;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < pc.epochs; ++epoch) {
    Rng shuffle_rng = Rng::derive(cfg.seed, {11, static_cast<uint64_t>(epoch)});
    for (int i = n - 1; i > 0; --i)
      std::swap(order[i], order[shuffle_rng.uniform_int(i + 1)]);

    for (int b = 0; b < batches_per_epoch; ++b) {
      const int lo = b * pc.batch_size;
      const int hi = std::min(n, lo + pc.batch_size);
      if (hi - lo < 2) continue;  // a singleton batch has no negatives

      Rng step_rng = Rng::derive(
          cfg.seed, {12, static_cast<uint64_t>(epoch), static_cast<uint64_t>(b)});
      std::vector<TensorPtr> hs, es;
      hs.reserve(hi - lo);
      es.reserve(hi - lo);
      for (int i = lo; i < hi; ++i) {
        auto [h, e] = encoder.encode(corpus[order[i]], /*train=*/true,
                                     step_rng);
        hs.push_back(h);
        es.push_back(e);
      }
      auto h_batch = stack_rows(hs);
      auto e_batch = stack_rows(es);
      auto parts = combined_loss(e_batch, h_batch, pc, step_rng);
      if (!std::isfinite(static_cast<double>(parts.total->item())))
        throw NumericError("pretrain: non-finite loss at step " +
                           std::to_string(result.steps));

      params.zero_grad();
      backward(parts.total);
      clip_global_norm(params, cfg.optim.clip_norm);
      opt.step(params);

      PretrainStepLog log;
      log.step = result.steps++;
      log.epoch = epoch;
      log.loss = parts.total->item();
      log.et = parts.et;
      log.tt = parts.tt;
      log.ee = parts.ee;
      log.lr_title = opt.last_lr_title;
      log.lr_other = opt.last_lr_other;
      log.wall_s = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
      result.log.push_back(log);
      if (on_step) on_step(log);
    }
  }
  return result;
}

}  // namespace newsrec
