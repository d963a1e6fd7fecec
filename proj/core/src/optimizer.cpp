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

#include "newsrec/optimizer.hpp"

#include <cmath>

namespace newsrec {

AdamW::AdamW(const ParameterStore& params, OptimizerConfig cfg)
    : cfg_(std::move(cfg)) {
  if (cfg_.total_steps < 1)
    throw ConfigError("AdamW: total_steps must be positive");
  if (cfg_.warmup_fraction < 0 || cfg_.warmup_fraction > 1)
    throw ConfigError("AdamW: warmup_fraction must be in [0, 1]");
  for (const auto& [name, t] : params.entries()) {
    Moments mo;
    mo.m.assign(t->data.size(), 0);
    mo.v.assign(t->data.size(), 0);
    slots_.emplace(name, std::move(mo));
  }
}

Real AdamW::lr_multiplier(int64_t step) const {
  const int64_t total = cfg_.total_steps;
  const int64_t warmup =
      static_cast<int64_t>(std::llround(cfg_.warmup_fraction * total));
  if (step >= total) return 0;
  if (step < warmup)
    return static_cast<Real>(step + 1) / static_cast<Real>(warmup);
  if (total == warmup) return 0;
  return static_cast<Real>(total - step) / static_cast<Real>(total - warmup);
}

void AdamW::step(ParameterStore& params) {
  const int64_t t = params.step_count;
  const Real mult = lr_multiplier(t);
  last_lr_title = cfg_.lr_title * mult;
  last_lr_other = cfg_.lr_other * mult;
  const Real bc1 = Real(1) - std::pow(cfg_.beta1, static_cast<Real>(t + 1));
  const Real bc2 = Real(1) - std::pow(cfg_.beta2, static_cast<Real>(t + 1));
  for (auto& [name, p] : params.entries()) {
    if (p->grad.empty()) continue;
    auto it = slots_.find(name);
    if (it == slots_.end())
      throw UsageError("AdamW: parameter appeared after construction: " +
                       name);
    const bool title_group =
        name.rfind(cfg_.title_group_prefix, 0) == 0;
    const Real lr = (title_group ? cfg_.lr_title : cfg_.lr_other) * mult;
    auto& mo = it->second;
    for (size_t i = 0; i < p->data.size(); ++i) {
      const Real g = p->grad[i];
      mo.m[i] = cfg_.beta1 * mo.m[i] + (Real(1) - cfg_.beta1) * g;
      mo.v[i] = cfg_.beta2 * mo.v[i] + (Real(1) - cfg_.beta2) * g * g;
      const Real mhat = mo.m[i] / bc1;
      const Real vhat = mo.v[i] / bc2;
      p->data[i] -= lr * (mhat / (std::sqrt(vhat) + cfg_.eps) +
                          cfg_.weight_decay * p->data[i]);
    }
  }
  params.step_count = t + 1;
}

Real clip_global_norm(ParameterStore& params, Real max_norm) {
  double sq = 0;
  for (const auto& [name, p] : params.entries())
    for (Real g : p->grad) sq += static_cast<double>(g) * g;
  const Real norm = static_cast<Real>(std::sqrt(sq));
  if (max_norm > 0 && norm > max_norm) {
    const Real s = max_norm / norm;
    for (auto& [name, p] : params.entries())
      for (Real& g : p->grad) g *= s;
  }
  return norm;
}

}  // namespace newsrec
