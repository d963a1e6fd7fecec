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

#include "newsrec/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"

namespace newsrec {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'N', 'R', 'C', 'K', 'P', 'T', '0', '1'};

std::vector<float> to_f32(const std::vector<Real>& v) {
  return std::vector<float>(v.begin(), v.end());
}

void write_u64_le(std::ostream& out, uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

uint64_t read_u64_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

Checkpoint Checkpoint::capture(const std::string& stage, const RunConfig& cfg,
                               const ParameterStore& params,
                               const Registry& tokens,
                               const Registry& entities,
                               const std::map<std::string, TensorPtr>& frozen) {
  Checkpoint ck;
  ck.stage = stage;
  ck.config = cfg;
  ck.tokens = tokens;
  ck.entities = entities;
  for (const auto& [name, t] : params.entries()) {
    TensorBlob blob;
    blob.rows = t->rows();
    blob.cols = t->cols();
    blob.values = to_f32(t->data);
    blob.trainable = true;
    ck.tensors.emplace(name, std::move(blob));
  }
  for (const auto& [name, t] : frozen) {
    TensorBlob blob;
    blob.rows = t->rows();
    blob.cols = t->cols();
    blob.values = to_f32(t->data);
    blob.trainable = false;
    ck.tensors.emplace(name, std::move(blob));
  }
  return ck;
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  json manifest = json::array();
  uint64_t offset = 0;
  for (const auto& [name, blob] : ck.tensors) {
    manifest.push_back({{"name", name},
                        {"rows", blob.rows},
                        {"cols", blob.cols},
                        {"offset", offset},
                        {"trainable", blob.trainable}});
    offset += blob.values.size() * sizeof(float);
  }
  json header = {
      {"format_version", ck.format_version},
      {"stage", ck.stage},
      {"config", json::parse(ck.config.to_json_text())},
      {"tokens", ck.tokens.names()},
      {"entities", ck.entities.names()},
      {"tensors", manifest},
  };
  const std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_u64_le(out, header_text.size());
  out.write(header_text.data(),
            static_cast<std::streamsize>(header_text.size()));
  for (const auto& [name, blob] : ck.tensors)
    out.write(reinterpret_cast<const char*>(blob.values.data()),
              static_cast<std::streamsize>(blob.values.size() * sizeof(float)));
  if (!out) throw DataError("failed while writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw FormatError("not a checkpoint file: " + path);
  const uint64_t header_len = read_u64_le(in);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw FormatError("truncated checkpoint header: " + path);

  json header;
  try {
    header = json::parse(header_text);
  } catch (const json::exception& e) {
    throw FormatError("corrupt checkpoint header: " + std::string(e.what()));
  }

  Checkpoint ck;
  ck.format_version = header.at("format_version").get<int>();
  if (ck.format_version != 1)
    throw FormatError("unsupported checkpoint format version " +
                      std::to_string(ck.format_version));
  ck.stage = header.at("stage").get<std::string>();
  ck.config = RunConfig::from_json_text(header.at("config").dump());
  for (const auto& n : header.at("tokens")) ck.tokens.add(n.get<std::string>());
  for (const auto& n : header.at("entities"))
    ck.entities.add(n.get<std::string>());

  const std::streampos payload_start = in.tellg();
  for (const auto& entry : header.at("tensors")) {
    Checkpoint::TensorBlob blob;
    const std::string name = entry.at("name").get<std::string>();
    blob.rows = entry.at("rows").get<int>();
    blob.cols = entry.at("cols").get<int>();
    blob.trainable = entry.at("trainable").get<bool>();
    const uint64_t offset = entry.at("offset").get<uint64_t>();
    const size_t count = static_cast<size_t>(blob.rows) * blob.cols;
    blob.values.resize(count);
    in.seekg(payload_start + static_cast<std::streamoff>(offset));
    in.read(reinterpret_cast<char*>(blob.values.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (!in) throw FormatError("truncated checkpoint payload at tensor '" +
                               name + "'");
    ck.tensors.emplace(name, std::move(blob));
  }
  return ck;
}

namespace {

void copy_blob(const std::string& name, const Checkpoint::TensorBlob& blob,
               Tensor& dst) {
  if (dst.rows() != blob.rows || dst.cols() != blob.cols)
    throw ConfigError("checkpoint tensor '" + name + "' has shape " +
                      std::to_string(blob.rows) + "x" +
                      std::to_string(blob.cols) + " but the model expects " +
                      std::to_string(dst.rows()) + "x" +
                      std::to_string(dst.cols()));
  for (size_t i = 0; i < blob.values.size(); ++i)
    dst.data[i] = static_cast<Real>(blob.values[i]);
}

bool has_prefix(const std::string& name,
                const std::vector<std::string>& prefixes) {
  for (const auto& p : prefixes)
    if (name.rfind(p, 0) == 0) return true;
  return false;
}

}  // namespace

int restore_parameters(ParameterStore& params, const Checkpoint& ck,
                       const std::vector<std::string>& prefixes) {
  int restored = 0;
  if (prefixes.empty()) {
    for (const auto& [name, blob] : ck.tensors) {
      if (!blob.trainable) continue;
      if (!params.contains(name))
        throw ConfigError("checkpoint tensor '" + name +
                          "' has no matching model parameter");
      copy_blob(name, blob, *params.at(name));
      ++restored;
    }
  } else {
    for (const auto& [name, t] : params.entries()) {
      if (!has_prefix(name, prefixes)) continue;
      auto it = ck.tensors.find(name);
      if (it == ck.tensors.end())
        throw ConfigError("checkpoint is missing tensor '" + name + "'");
      copy_blob(name, it->second, *t);
      ++restored;
    }
  }
  return restored;
}

void restore_frozen(const std::map<std::string, TensorPtr>& frozen,
                    const Checkpoint& ck) {
  for (const auto& [name, t] : frozen) {
    auto it = ck.tensors.find(name);
    if (it == ck.tensors.end())
      throw ConfigError("checkpoint is missing tensor '" + name + "'");
    copy_blob(name, it->second, *t);
  }
}

}  // namespace newsrec
