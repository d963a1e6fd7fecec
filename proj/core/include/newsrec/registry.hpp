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
#include <unordered_map>
#include <vector>

#include "newsrec/common.hpp"

namespace newsrec {

// Dense string -> id map. Ids are assigned in first-add order, which keeps
// them deterministic for a fixed input sequence and stable across
// save/load.
class Registry {
 public:
  int add(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(names_.size());
    index_.emplace(name, id);
    names_.push_back(name);
    return id;
  }

  // -1 when absent.
  int lookup(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
  }

  int id_or(const std::string& name, int fallback) const {
    const int id = lookup(name);
    return id < 0 ? fallback : id;
  }

  const std::string& name(int id) const {
    if (id < 0 || id >= static_cast<int>(names_.size()))
      throw UsageError("registry id out of range: " + std::to_string(id));
    return names_[id];
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> names_;
};

}  // namespace newsrec
