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

#include "newsrec/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace newsrec {

namespace {
thread_local bool g_grad_enabled = true;
}

bool grad_enabled() { return g_grad_enabled; }
void set_grad_enabled(bool on) { g_grad_enabled = on; }

TensorPtr Tensor::from(int r, int c, std::vector<Real> values) {
  if (static_cast<int64_t>(values.size()) != static_cast<int64_t>(r) * c)
    throw ShapeError("value count does not match shape");
  auto t = make(r, c);
  t->data = std::move(values);
  return t;
}

bool Tensor::all_finite() const {
  return std::all_of(data.begin(), data.end(),
                     [](Real v) { return std::isfinite(v); });
}

void backward(const TensorPtr& loss) {
  if (!loss) throw UsageError("backward on null tensor");
  if (loss->size() != 1)
    throw UsageError("backward requires a scalar (1x1) loss tensor");
  if (loss->backward_ran)
    throw UsageError(
        "backward already ran for this loss; rebuild the graph before "
        "calling again");
  loss->backward_ran = true;

  // Iterative post-order DFS: parents land before children, so the reverse
  // walk visits every consumer before the node it feeds.
  std::vector<Tensor*> order;
  std::unordered_set<Tensor*> visited;
  struct Frame {
    Tensor* node;
    size_t next_parent;
  };
  std::vector<Frame> stack;
  stack.push_back({loss.get(), 0});
  visited.insert(loss.get());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_parent < f.node->parents.size()) {
      Tensor* p = f.node->parents[f.next_parent++].get();
      if (visited.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(f.node);
      stack.pop_back();
    }
  }

  loss->ensure_grad();
  loss->grad[0] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Tensor* n = *it;
    if (n->backprop && !n->grad.empty()) n->backprop(*n);
  }
}

void fill_init(Tensor& t, ParameterStore::Init init, Rng& rng) {
  switch (init) {
    case ParameterStore::Init::Zero:
      std::fill(t.data.begin(), t.data.end(), Real(0));
      break;
    case ParameterStore::Init::One:
      std::fill(t.data.begin(), t.data.end(), Real(1));
      break;
    case ParameterStore::Init::XavierUniform: {
      double bound = std::sqrt(6.0 / (t.rows() + t.cols()));
      for (auto& v : t.data) v = static_cast<Real>(rng.uniform(-bound, bound));
      break;
    }
    case ParameterStore::Init::Normal002:
      for (auto& v : t.data) v = static_cast<Real>(0.02 * rng.normal());
      break;
  }
}

TensorPtr ParameterStore::create(const std::string& name, int r, int c,
                                 Init init, Rng& rng) {
  if (entries_.count(name))
    throw UsageError("parameter name already registered: " + name);
  auto t = Tensor::make(r, c);
  fill_init(*t, init, rng);
  t->requires_grad = true;
  entries_[name] = t;
  return t;
}

TensorPtr ParameterStore::at(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw UsageError("unknown parameter: " + name);
  return it->second;
}

void ParameterStore::put(const std::string& name, TensorPtr t) {
  if (entries_.count(name))
    throw UsageError("parameter name already registered: " + name);
  t->requires_grad = true;
  entries_[name] = std::move(t);
}

int64_t ParameterStore::parameter_count() const {
  int64_t n = 0;
  for (const auto& [name, t] : entries_) n += t->size();
  return n;
}

}  // namespace newsrec
