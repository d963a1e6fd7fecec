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

#include <map>
#include <string>
#include <vector>

#include "newsrec/config.hpp"
#include "newsrec/registry.hpp"
#include "newsrec/tensor.hpp"

namespace newsrec {

// On-disk layout: 8-byte magic, little-endian u64 header length, JSON
// header (format version, stage tag, config echo, registries, tensor
// manifest with byte offsets), then raw little-endian float32 payloads.
struct Checkpoint {
  struct TensorBlob {
    int rows = 0, cols = 0;
    std::vector<float> values;
    bool trainable = true;
  };

  int format_version = 1;
  std::string stage;  // "pretrain" | "recsys"
  RunConfig config;
  Registry tokens;
  Registry entities;
  std::map<std::string, TensorBlob> tensors;

  static Checkpoint capture(const std::string& stage, const RunConfig& cfg,
                            const ParameterStore& params,
                            const Registry& tokens, const Registry& entities,
                            const std::map<std::string, TensorPtr>& frozen =
                                {});
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

// Copies checkpoint tensors into existing parameters. With prefixes given,
// every store entry under one of the prefixes must be present in the
// checkpoint with a matching shape; with no prefixes, every trainable
// checkpoint tensor must exist in the store. Returns the number of tensors
// restored. Shape or coverage mismatches raise ConfigError naming the
// tensor.
int restore_parameters(ParameterStore& params, const Checkpoint& ck,
                       const std::vector<std::string>& prefixes = {});

// Restores non-trainable extras (e.g. frozen projections) by name.
void restore_frozen(const std::map<std::string, TensorPtr>& frozen,
                    const Checkpoint& ck);

}  // namespace newsrec
