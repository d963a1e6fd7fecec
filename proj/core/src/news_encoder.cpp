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

#include "newsrec/news_encoder.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

namespace newsrec {

using namespace ops;

Registry make_entity_registry(const std::vector<std::string>& names) {
  Registry r;
  r.add(EntityMemory::kHandleName);
  r.add(EntityMemory::kUnknownName);
  for (const auto& n : names) r.add(n);
  return r;
}

EntityMemory::EntityMemory(ParameterStore& store, Registry entities,
                           int entity_dim, Rng& rng)
    : registry_(std::move(entities)) {
  if (registry_.size() < 2 ||
      registry_.name(kHandleId) != std::string(kHandleName) ||
      registry_.name(kUnknownId) != std::string(kUnknownName))
    throw UsageError(
        "entity registry must reserve ids 0/1 for the handle and unknown "
        "rows; build it with make_entity_registry");
  table_ = store.create("see.memory", registry_.size(), entity_dim,
                        ParameterStore::Init::Normal002, rng);
}

void EntityMemory::init_random(Rng& rng) {
  fill_init(*table_, ParameterStore::Init::Normal002, rng);
}

int EntityMemory::init_from_file(const std::string& path, Rng& rng) {
  init_random(rng);
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open entity embedding file: " + path);
  std::string line;
  int imported = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw FormatError("entity embedding file line " +
                        std::to_string(line_no) + ": missing tab separator");
    const std::string name = line.substr(0, tab);
    std::istringstream values(line.substr(tab + 1));
    std::vector<Real> row;
    double v;
    while (values >> v) row.push_back(static_cast<Real>(v));
    if (static_cast<int>(row.size()) != dim())
      throw FormatError("entity embedding file line " +
                        std::to_string(line_no) + ": expected " +
                        std::to_string(dim()) + " values, got " +
                        std::to_string(row.size()));
    const int id = registry_.lookup(name);
    if (id < 0 || id == kHandleId) continue;
    for (int j = 0; j < dim(); ++j) table_->at(id, j) = row[j];
    ++imported;
  }
  return imported;
}

NewsEncoder::NewsEncoder(const ModelConfig& cfg, ParameterStore& store,
                         EntityMemory& memory, Rng& rng)
    : cfg_(cfg), memory_(memory) {
  cfg_.validate();
  if (cfg_.vocab_size < 1)
    throw ConfigError("NewsEncoder: vocab_size must be set from the data");
  if (memory_.dim() != cfg_.entity_dim)
    throw ConfigError("NewsEncoder: entity memory width disagrees with config");
  using Init = ParameterStore::Init;

  tok_emb_ = store.create("title.tok_emb", cfg_.vocab_size, cfg_.dim,
                          Init::Normal002, rng);
  title_pe_ = sinusoidal_pe(cfg_.max_title_len, cfg_.dim);
  entity_pe_ = sinusoidal_pe(cfg_.max_entities + 1, cfg_.entity_dim);

  for (int i = 0; i < cfg_.title_layers; ++i)
    title_layers_.push_back(TransformerLayerParams::create(
        store, "title.layer" + std::to_string(i), cfg_.dim,
        cfg_.ffn_mult * cfg_.dim, cfg_.ln_learnable, rng));
  title_attn_ = AttentionParams::create(store, "title.attn", cfg_.dim, rng);
  title_ln_ =
      LayerNormParams::create(store, "title.ln", cfg_.dim, cfg_.ln_learnable,
                              rng);
  title_pool_ = PoolParams::create(store, "title.pool", cfg_.dim,
                                   cfg_.pool_hidden(), rng);

  for (int i = 0; i < cfg_.see_layers; ++i)
    see_layers_.push_back(TransformerLayerParams::create(
        store, "see.layer" + std::to_string(i), cfg_.entity_dim,
        cfg_.ffn_mult * cfg_.entity_dim, cfg_.ln_learnable, rng));

  proj_title_w_ = store.create("proj.title.w", cfg_.dim, cfg_.dim,
                               Init::XavierUniform, rng);
  proj_title_b_ = store.create("proj.title.b", 1, cfg_.dim, Init::Zero, rng);
  proj_entity_w_ = store.create("proj.entity.w", cfg_.entity_dim, cfg_.dim,
                                Init::XavierUniform, rng);
  proj_entity_b_ = store.create("proj.entity.b", 1, cfg_.dim, Init::Zero, rng);
}

TensorPtr NewsEncoder::encode_title(const NewsArticle& article, bool train,
                                    Rng& rng) const {
  if (article.tokens.empty())
    throw UsageError("encode_title: article '" + article.id +
                     "' has no tokens");
  if (static_cast<int>(article.tokens.size()) > cfg_.max_title_len)
    throw DataError("encode_title: article '" + article.id +
                    "' exceeds the title length cap");
  for (int t : article.tokens)
    if (t < 0 || t >= cfg_.vocab_size)
      throw DataError("encode_title: token id " + std::to_string(t) +
                      " out of range in article '" + article.id + "'");

  std::vector<int> positions(article.tokens.size());
  std::iota(positions.begin(), positions.end(), 0);
  auto x = add(gather_rows(tok_emb_, article.tokens),
               gather_rows(title_pe_, positions));
  x = ops::dropout(x, cfg_.encoder_dropout, train, rng);
  for (const auto& layer : title_layers_)
    x = transformer_layer(x, layer, cfg_.title_heads, cfg_.ln_eps,
                          cfg_.encoder_dropout, train, rng);
  auto attended = multi_head_attention(x, x, x, title_attn_, cfg_.title_heads);
  auto normed = residual_layer_norm(x, attended, title_ln_, cfg_.ln_eps);
  return additive_attention_pool(normed, title_pool_);
}

TensorPtr NewsEncoder::encode_entities(const NewsArticle& article, bool train,
                                       Rng& rng) const {
  if (static_cast<int>(article.entities.size()) > cfg_.max_entities)
    throw DataError("encode_entities: article '" + article.id +
                    "' exceeds the entity cap");
  std::vector<int> ids;
  ids.reserve(article.entities.size() + 1);
  ids.push_back(EntityMemory::kHandleId);
  for (int e : article.entities) {
    if (e < 0 || e >= memory_.count())
      throw DataError("encode_entities: entity id " + std::to_string(e) +
                      " out of range in article '" + article.id + "'");
    ids.push_back(e);
  }

  auto x = gather_rows(memory_.table(), ids);
  if (cfg_.entity_pe) {
    std::vector<int> positions(ids.size());
    std::iota(positions.begin(), positions.end(), 0);
    x = add(x, gather_rows(entity_pe_, positions));
  }
  x = ops::dropout(x, cfg_.encoder_dropout, train, rng);
  for (const auto& layer : see_layers_)
    x = transformer_layer(x, layer, cfg_.see_heads, cfg_.ln_eps,
                          cfg_.encoder_dropout, train, rng);
  return project_to_d(slice_row(x, 0), ProjectionSide::Entity);
}

TensorPtr NewsEncoder::project_to_d(const TensorPtr& x,
                                    ProjectionSide side) const {
  const auto& w =
      side == ProjectionSide::Title ? proj_title_w_ : proj_entity_w_;
  const auto& b =
      side == ProjectionSide::Title ? proj_title_b_ : proj_entity_b_;
  if (x->cols() != w->rows())
    throw ShapeError("project_to_d: input width does not match the side");
  return tanh_(affine(x, w, b));
}

std::pair<TensorPtr, TensorPtr> NewsEncoder::encode(const NewsArticle& article,
                                                    bool train,
                                                    Rng& rng) const {
  auto h = project_to_d(encode_title(article, train, rng),
                        ProjectionSide::Title);
  auto e = encode_entities(article, train, rng);
  return {h, e};
}

}  // namespace newsrec
