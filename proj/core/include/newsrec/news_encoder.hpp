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
#include <utility>
#include <vector>

#include "newsrec/attention.hpp"
#include "newsrec/config.hpp"
#include "newsrec/registry.hpp"
#include "newsrec/tensor.hpp"

namespace newsrec {

struct NewsArticle {
  std::string id;
  std::vector<int> tokens;    // ids into the token registry, <= max_title_len
  std::vector<int> entities;  // ids into the entity memory, may be empty
};

// Learnable embedding table holding one row per known entity plus two
// reserved rows: the aggregation handle (id 0) and the unknown-entity
// fallback (id 1).
class EntityMemory {
 public:
  static constexpr int kHandleId = 0;
  static constexpr int kUnknownId = 1;
  static constexpr const char* kHandleName = "[ent]";
  static constexpr const char* kUnknownName = "[unk]";

  // `entities` must already contain the two reserved names at ids 0/1;
  // see make_entity_registry.
  EntityMemory(ParameterStore& store, Registry entities, int entity_dim,
               Rng& rng);

  const Registry& registry() const { return registry_; }
  TensorPtr table() const { return table_; }
  int count() const { return table_->rows(); }
  int dim() const { return table_->cols(); }

  // Re-randomizes every row.
  void init_random(Rng& rng);
  // Loads rows from a TSV of `entity<TAB>v1 v2 ... v_de`, matching by
  // registry string. Rows absent from the file keep their random values;
  // the handle row is never overwritten. Wrong vector width is a
  // FormatError. Returns the number of rows imported.
  int init_from_file(const std::string& path, Rng& rng);

 private:
  Registry registry_;
  TensorPtr table_;
};

// Prepends the two reserved rows to a registry of raw entity names.
Registry make_entity_registry(const std::vector<std::string>& names);

enum class ProjectionSide { Title, Entity };

// Produces the per-article pair (h, e): the pooled title embedding and the
// projected signature entity embedding. The same instance serves
// pre-training and recommendation.
class NewsEncoder {
 public:
  NewsEncoder(const ModelConfig& cfg, ParameterStore& store,
              EntityMemory& memory, Rng& rng);

  // Pooled title vector (1 x d), before the projection head.
  TensorPtr encode_title(const NewsArticle& article, bool train,
                         Rng& rng) const;

  // Handle-position output of the entity stack, projected to d (1 x d).
  // Defined for zero entities (the handle alone).
  TensorPtr encode_entities(const NewsArticle& article, bool train,
                            Rng& rng) const;

  // One affine layer + tanh per side.
  TensorPtr project_to_d(const TensorPtr& x, ProjectionSide side) const;

  // (projected title, projected entity) pair.
  std::pair<TensorPtr, TensorPtr> encode(const NewsArticle& article,
                                         bool train, Rng& rng) const;

  const ModelConfig& config() const { return cfg_; }

 private:
  ModelConfig cfg_;
  EntityMemory& memory_;
  TensorPtr tok_emb_;
  TensorPtr title_pe_;   // constant
  TensorPtr entity_pe_;  // constant
  std::vector<TransformerLayerParams> title_layers_;
  std::vector<TransformerLayerParams> see_layers_;
  AttentionParams title_attn_;
  LayerNormParams title_ln_;
  PoolParams title_pool_;
  TensorPtr proj_title_w_, proj_title_b_;
  TensorPtr proj_entity_w_, proj_entity_b_;
};

}  // namespace newsrec
