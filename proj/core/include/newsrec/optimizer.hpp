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

#include "newsrec/tensor.hpp"

namespace newsrec {

// Two learning-rate groups: the title-encoder parameters (name prefix
// below) and everything else. The schedule ramps linearly over the warm-up
// steps, then decays linearly to zero at total_steps.
struct OptimizerConfig {
  Real lr_title = Real(1e-5);
  Real lr_other = Real(1e-4);
  Real beta1 = Real(0.9);
  Real beta2 = Real(0.999);
  Real eps = Real(1e-8);
  Real weight_decay = Real(0.01);
  Real warmup_fraction = Real(0.1);
  int64_t total_steps = 1;
  Real clip_norm = Real(1.0);  // 0 disables clipping
  std::string title_group_prefix = "title.";
};

class AdamW {
 public:
  AdamW(const ParameterStore& params, OptimizerConfig cfg);

  // Schedule multiplier at a 0-based step index. (step+1)/warmup during
  // warm-up so the first update is nonzero; 0 at and beyond total_steps.
  Real lr_multiplier(int64_t step) const;

  // Applies one decoupled-weight-decay update using params.step_count as
  // the schedule position, then increments it. Parameters whose grad
  // buffer was never touched are skipped.
  void step(ParameterStore& params);

  const OptimizerConfig& config() const { return cfg_; }
  Real last_lr_title = 0;
  Real last_lr_other = 0;

 private:
  struct Moments {
    std::vector<Real> m, v;
  };
  std::map<std::string, Moments> slots_;
  OptimizerConfig cfg_;
};

// Free-function form used by training loops.
inline void adamw_step(ParameterStore& params, AdamW& state) {
  state.step(params);
}

// Scales all gradients so their global L2 norm is at most max_norm.
// Returns the pre-clip norm.
Real clip_global_norm(ParameterStore& params, Real max_norm);

}  // namespace newsrec
