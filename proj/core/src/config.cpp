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

#include "newsrec/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace newsrec {

using nlohmann::json;

namespace {

// Pulls known keys out of `j`, complaining about unknown ones so config
// typos fail loudly.
class Section {
 public:
  Section(const json& j, std::string name) : name_(std::move(name)) {
    if (!j.is_object())
      throw ConfigError("config section '" + name_ + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) pending_[it.key()] = *it;
  }

  template <typename T>
  void get(const char* key, T& out) {
    auto it = pending_.find(key);
    if (it == pending_.end()) return;
    try {
      out = it->second.get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config field '" + name_ + "." + key +
                        "' has the wrong type");
    }
    pending_.erase(it);
  }

  json take(const char* key) {
    auto it = pending_.find(key);
    if (it == pending_.end()) return json();
    json j = it->second;
    pending_.erase(it);
    return j;
  }

  void finish() const {
    if (pending_.empty()) return;
    std::string keys;
    for (const auto& [k, v] : pending_) {
      if (!keys.empty()) keys += ", ";
      keys += k;
    }
    throw ConfigError("unknown config fields in '" + name_ + "': " + keys);
  }

 private:
  std::string name_;
  std::map<std::string, json> pending_;
};

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

void ModelConfig::validate() const {
  check(dim >= 2 && dim % 2 == 0, "model.dim must be even and >= 2");
  check(entity_dim >= 2 && entity_dim % 2 == 0,
        "model.entity_dim must be even and >= 2");
  check(title_layers >= 0, "model.title_layers must be >= 0");
  check(see_layers >= 0, "model.see_layers must be >= 0");
  check(title_heads >= 1 && dim % title_heads == 0,
        "model.dim must be divisible by model.title_heads");
  check(user_heads >= 1 && dim % user_heads == 0,
        "model.dim must be divisible by model.user_heads");
  check(see_heads >= 1 && entity_dim % see_heads == 0,
        "model.entity_dim must be divisible by model.see_heads");
  check(ffn_mult >= 1, "model.ffn_mult must be >= 1");
  check(attn_hidden >= 0, "model.attn_hidden must be >= 0");
  check(max_title_len >= 1, "model.max_title_len must be >= 1");
  check(max_entities >= 0, "model.max_entities must be >= 0");
  check(min_history >= 1, "model.min_history must be >= 1");
  check(max_history >= min_history,
        "model.max_history must be >= model.min_history");
  check(encoder_dropout >= 0 && encoder_dropout < 1,
        "model.encoder_dropout must be in [0, 1)");
  check(ln_eps > 0, "model.ln_eps must be positive");
}

void PretrainConfig::validate() const {
  check(batch_size >= 2, "pretrain.batch_size must be >= 2");
  check(tau_et > 0 && tau_tt > 0 && tau_ee > 0,
        "pretrain temperatures must be positive");
  check(alpha >= 0 && beta >= 0 && delta >= 0,
        "pretrain loss weights must be non-negative");
  check(mirror_dropout >= 0 && mirror_dropout < 1,
        "pretrain.mirror_dropout must be in [0, 1)");
  check(epochs >= 0, "pretrain.epochs must be >= 0");
}

void TrainConfig::validate() const {
  check(batch_size >= 1, "train.batch_size must be >= 1");
  check(negatives >= 1, "train.negatives must be >= 1");
  check(epochs >= 0, "train.epochs must be >= 0");
  check(val_interval >= 0, "train.val_interval must be >= 0");
}

Variant parse_variant(const std::string& name) {
  if (name == "full") return Variant::Full;
  if (name == "no_intra") return Variant::NoIntra;
  if (name == "no_cl_et") return Variant::NoClEt;
  if (name == "no_cl_tt_ee") return Variant::NoClTtEe;
  if (name == "no_inter") return Variant::NoInter;
  if (name == "no_agg") return Variant::NoAgg;
  throw UsageError(
      "unknown variant '" + name +
      "' (expected full, no_intra, no_cl_et, no_cl_tt_ee, no_inter, no_agg)");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::NoIntra: return "no_intra";
    case Variant::NoClEt: return "no_cl_et";
    case Variant::NoClTtEe: return "no_cl_tt_ee";
    case Variant::NoInter: return "no_inter";
    case Variant::NoAgg: return "no_agg";
  }
  throw UsageError("unhandled variant");
}

void RunConfig::validate() const {
  model.validate();
  pretrain.validate();
  train.validate();
  check(optim.lr_title >= 0 && optim.lr_other >= 0,
        "optim learning rates must be non-negative");
  check(optim.warmup_fraction >= 0 && optim.warmup_fraction <= 1,
        "optim.warmup_fraction must be in [0, 1]");
  check(grad_shards >= 1, "grad_shards must be >= 1");
  check(threads >= 1, "threads must be >= 1");
}

void RunConfig::apply_variant() {
  if (variant == Variant::NoClEt) pretrain.alpha = 0;
  if (variant == Variant::NoClTtEe) {
    pretrain.beta = 0;
    pretrain.delta = 0;
  }
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  Section top(root, "config");

  if (json m = top.take("model"); !m.is_null()) {
    Section s(m, "model");
    s.get("dim", cfg.model.dim);
    s.get("entity_dim", cfg.model.entity_dim);
    s.get("title_layers", cfg.model.title_layers);
    s.get("see_layers", cfg.model.see_layers);
    s.get("title_heads", cfg.model.title_heads);
    s.get("see_heads", cfg.model.see_heads);
    s.get("user_heads", cfg.model.user_heads);
    s.get("ffn_mult", cfg.model.ffn_mult);
    s.get("attn_hidden", cfg.model.attn_hidden);
    s.get("max_title_len", cfg.model.max_title_len);
    s.get("max_entities", cfg.model.max_entities);
    s.get("min_history", cfg.model.min_history);
    s.get("max_history", cfg.model.max_history);
    s.get("encoder_dropout", cfg.model.encoder_dropout);
    s.get("ln_eps", cfg.model.ln_eps);
    s.get("ln_learnable", cfg.model.ln_learnable);
    s.get("entity_pe", cfg.model.entity_pe);
    s.get("tie_gate", cfg.model.tie_gate);
    s.get("vocab_size", cfg.model.vocab_size);
    s.get("entity_count", cfg.model.entity_count);
    s.finish();
  }
  if (json p = top.take("pretrain"); !p.is_null()) {
    Section s(p, "pretrain");
    s.get("batch_size", cfg.pretrain.batch_size);
    s.get("tau_et", cfg.pretrain.tau_et);
    s.get("tau_tt", cfg.pretrain.tau_tt);
    s.get("tau_ee", cfg.pretrain.tau_ee);
    s.get("alpha", cfg.pretrain.alpha);
    s.get("beta", cfg.pretrain.beta);
    s.get("delta", cfg.pretrain.delta);
    s.get("normalize_weights", cfg.pretrain.normalize_weights);
    s.get("mirror_dropout", cfg.pretrain.mirror_dropout);
    s.get("epochs", cfg.pretrain.epochs);
    s.finish();
  }
  if (json t = top.take("train"); !t.is_null()) {
    Section s(t, "train");
    s.get("batch_size", cfg.train.batch_size);
    s.get("negatives", cfg.train.negatives);
    s.get("epochs", cfg.train.epochs);
    s.get("literal_double_softmax", cfg.train.literal_double_softmax);
    s.get("val_interval", cfg.train.val_interval);
    s.finish();
  }
  if (json o = top.take("optim"); !o.is_null()) {
    Section s(o, "optim");
    s.get("lr_title", cfg.optim.lr_title);
    s.get("lr_other", cfg.optim.lr_other);
    s.get("beta1", cfg.optim.beta1);
    s.get("beta2", cfg.optim.beta2);
    s.get("eps", cfg.optim.eps);
    s.get("weight_decay", cfg.optim.weight_decay);
    s.get("warmup_fraction", cfg.optim.warmup_fraction);
    s.get("clip_norm", cfg.optim.clip_norm);
    s.finish();
  }
  top.get("seed", cfg.seed);
  top.get("grad_shards", cfg.grad_shards);
  top.get("threads", cfg.threads);
  std::string variant = variant_name(cfg.variant);
  top.get("variant", variant);
  cfg.variant = parse_variant(variant);
  top.finish();
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
  json root;
  root["model"] = {
      {"dim", model.dim},
      {"entity_dim", model.entity_dim},
      {"title_layers", model.title_layers},
      {"see_layers", model.see_layers},
      {"title_heads", model.title_heads},
      {"see_heads", model.see_heads},
      {"user_heads", model.user_heads},
      {"ffn_mult", model.ffn_mult},
      {"attn_hidden", model.attn_hidden},
      {"max_title_len", model.max_title_len},
      {"max_entities", model.max_entities},
      {"min_history", model.min_history},
      {"max_history", model.max_history},
      {"encoder_dropout", model.encoder_dropout},
      {"ln_eps", model.ln_eps},
      {"ln_learnable", model.ln_learnable},
      {"entity_pe", model.entity_pe},
      {"tie_gate", model.tie_gate},
      {"vocab_size", model.vocab_size},
      {"entity_count", model.entity_count},
  };
  root["pretrain"] = {
      {"batch_size", pretrain.batch_size},
      {"tau_et", pretrain.tau_et},
      {"tau_tt", pretrain.tau_tt},
      {"tau_ee", pretrain.tau_ee},
      {"alpha", pretrain.alpha},
      {"beta", pretrain.beta},
      {"delta", pretrain.delta},
      {"normalize_weights", pretrain.normalize_weights},
      {"mirror_dropout", pretrain.mirror_dropout},
      {"epochs", pretrain.epochs},
  };
  root["train"] = {
      {"batch_size", train.batch_size},
      {"negatives", train.negatives},
      {"epochs", train.epochs},
      {"literal_double_softmax", train.literal_double_softmax},
      {"val_interval", train.val_interval},
  };
  root["optim"] = {
      {"lr_title", optim.lr_title},
      {"lr_other", optim.lr_other},
      {"beta1", optim.beta1},
      {"beta2", optim.beta2},
      {"eps", optim.eps},
      {"weight_decay", optim.weight_decay},
      {"warmup_fraction", optim.warmup_fraction},
      {"clip_norm", optim.clip_norm},
  };
  root["seed"] = seed;
  root["grad_shards"] = grad_shards;
  root["threads"] = threads;
  root["variant"] = variant_name(variant);
  return root.dump(2) + "\n";
}

void RunConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << to_json_text();
}

}  // namespace newsrec
