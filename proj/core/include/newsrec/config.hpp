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

#include <cstdint>
#include <string>

#include "newsrec/common.hpp"
#include "newsrec/optimizer.hpp"

namespace newsrec {

// Architecture hyperparameters. vocab_size / entity_count are filled from
// the data registries before a model is built.
struct ModelConfig {
  int dim = 128;         // title/model width d
  int entity_dim = 100;  // entity memory width d_e
  int title_layers = 2;
  int see_layers = 2;
  int title_heads = 4;
  int see_heads = 4;
  int user_heads = 4;
  int ffn_mult = 2;     // feed-forward hidden = ffn_mult * width
  int attn_hidden = 0;  // additive-attention hidden width; 0 means dim
  int max_title_len = 20;
  int max_entities = 10;
  int min_history = 5;
  int max_history = 50;
  Real encoder_dropout = Real(0.0);
  Real ln_eps = Real(1e-5);
  bool ln_learnable = true;
  bool entity_pe = true;  // test hook: disable positional encoding in the
                          // entity encoder
  bool tie_gate = true;   // share gate parameters between user and candidate
  int vocab_size = 0;
  int entity_count = 0;

  int pool_hidden() const { return attn_hidden > 0 ? attn_hidden : dim; }
  void validate() const;
};

// Stage 1: entity-title contrastive learning.
struct PretrainConfig {
  int batch_size = 128;
  Real tau_et = Real(0.1);
  Real tau_tt = Real(0.1);
  Real tau_ee = Real(0.1);
  Real alpha = Real(0.3);
  Real beta = Real(0.2);
  Real delta = Real(0.2);
  bool normalize_weights = false;  // rescale alpha/beta/delta to sum to 1
  Real mirror_dropout = Real(0.1);
  int epochs = 2;

  void validate() const;
};

// Stage 2: click-ranking optimization.
struct TrainConfig {
  int batch_size = 64;
  int negatives = 4;  // r
  int epochs = 3;
  bool literal_double_softmax = false;  // apply softmax before the ranking
                                        // loss instead of using raw scores
  int val_interval = 200;               // steps between validation passes;
                                        // 0 = end of epoch only
  void validate() const;
};

enum class Variant {
  Full,
  NoIntra,    // skip the stage-1 checkpoint
  NoClEt,     // alpha = 0 in the combined pre-training loss
  NoClTtEe,   // beta = delta = 0
  NoInter,    // self-attention inside each user tower
  NoAgg,      // frozen concat projection instead of the learned gate
};

Variant parse_variant(const std::string& name);
std::string variant_name(Variant v);

struct RunConfig {
  ModelConfig model;
  PretrainConfig pretrain;
  TrainConfig train;
  OptimizerConfig optim;
  uint64_t seed = 42;
  int grad_shards = 2;  // fixed graph-shard count; results depend on this,
                        // not on the executing thread count
  int threads = 2;
  Variant variant = Variant::Full;

  void validate() const;

  static RunConfig load(const std::string& path);
  static RunConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
  void save(const std::string& path) const;

  // Folds the variant into stage configs (loss-weight zeroing).
  void apply_variant();
  bool loads_stage1_checkpoint() const { return variant != Variant::NoIntra; }
  bool cross_attention() const { return variant != Variant::NoInter; }
  bool learned_gate() const { return variant != Variant::NoAgg; }
};

}  // namespace newsrec
