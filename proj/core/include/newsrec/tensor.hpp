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
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "newsrec/common.hpp"

namespace newsrec {

class Tensor;
using TensorPtr = std::shared_ptr<Tensor>;

// Thread-local switch: when off, ops run forward-only and record no graph.
bool grad_enabled();
void set_grad_enabled(bool on);

// RAII guard for inference paths.
class NoGradGuard {
 public:
  NoGradGuard() : prev_(grad_enabled()) { set_grad_enabled(false); }
  ~NoGradGuard() { set_grad_enabled(prev_); }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool prev_;
};

// A dense row-major tensor that doubles as a node in a dynamic reverse-mode
// graph. Ops in ops.hpp wire up `parents` and `backprop`; backward() walks
// the graph in reverse topological order and fills grad buffers.
class Tensor {
 public:
  std::vector<int> shape;
  std::vector<Real> data;
  std::vector<Real> grad;  // empty until first accumulation
  bool requires_grad = false;

  std::vector<TensorPtr> parents;
  std::function<void(Tensor&)> backprop;  // accumulates into parents' grads
  bool backward_ran = false;

  Tensor() = default;
  Tensor(int r, int c, Real fill = 0)
      : shape{r, c}, data(static_cast<size_t>(r) * c, fill) {
    if (r <= 0 || c <= 0) throw ShapeError("tensor dims must be positive");
  }

  static TensorPtr make(int r, int c, Real fill = 0) {
    return std::make_shared<Tensor>(r, c, fill);
  }
  static TensorPtr from(int r, int c, std::vector<Real> values);
  static TensorPtr scalar(Real v) {
    auto t = make(1, 1);
    t->data[0] = v;
    return t;
  }

  int rows() const { return shape.empty() ? 0 : shape[0]; }
  int cols() const { return shape.size() < 2 ? 1 : shape[1]; }
  int64_t size() const { return static_cast<int64_t>(data.size()); }

  Real& at(int r, int c) { return data[static_cast<size_t>(r) * cols() + c]; }
  Real at(int r, int c) const {
    return data[static_cast<size_t>(r) * cols() + c];
  }
  Real item() const {
    if (size() != 1) throw UsageError("item() requires a 1x1 tensor");
    return data[0];
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  // True when this node participates in gradient flow.
  bool in_graph() const { return requires_grad || static_cast<bool>(backprop); }

  void ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), 0);
  }
  void zero_grad() {
    if (!grad.empty()) grad.assign(grad.size(), 0);
  }
  bool all_finite() const;
};

// Reverse-mode sweep from a scalar loss. Fills `grad` for every in-graph
// tensor reachable from `loss`. A second call on the same loss node throws.
void backward(const TensorPtr& loss);

// Named collection of trainable tensors. Iteration order is lexicographic,
// which keeps optimizer sweeps and serialization deterministic.
class ParameterStore {
 public:
  enum class Init { Zero, One, XavierUniform, Normal002 };

  TensorPtr create(const std::string& name, int r, int c, Init init, Rng& rng);
  TensorPtr at(const std::string& name) const;
  bool contains(const std::string& name) const {
    return entries_.count(name) > 0;
  }
  void put(const std::string& name, TensorPtr t);

  void zero_grad() {
    for (auto& [name, t] : entries_) t->zero_grad();
  }

  const std::map<std::string, TensorPtr>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  int64_t parameter_count() const;

  int64_t step_count = 0;

 private:
  std::map<std::string, TensorPtr> entries_;
};

void fill_init(Tensor& t, ParameterStore::Init init, Rng& rng);

}  // namespace newsrec
