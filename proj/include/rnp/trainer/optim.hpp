/* Copyright 2026 The RNP Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstdint>
#include <vector>

#include "rnp/numkit/tensor.hpp"

namespace rnp {

struct AdamConfig {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  void validate() const;
};

struct OptimizerState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::uint64_t step = 0;
};

// Bias-corrected Adam: m ← β1·m + (1−β1)·g, v ← β2·v + (1−β2)·g²,
// θ ← θ − lr·m̂/(√v̂ + ε) with m̂ = m/(1−β1^t), v̂ = v/(1−β2^t).
class Adam {
 public:
  Adam(AdamConfig cfg, const std::vector<Tensor>& params);
  void step(std::vector<Tensor>& params, const std::vector<Tensor>& grads);
  const OptimizerState& state() const { return state_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  OptimizerState state_;
};

enum class AlphaScheduleKind { Constant, LinearAnneal };

class AlphaSchedule {
 public:
  static AlphaSchedule constant(double alpha);
  // Requires 0 < end ≤ start < 1 and anneal_steps ≥ 1.
  static AlphaSchedule linear_anneal(double start, double end, std::uint64_t anneal_steps);

  double at(std::uint64_t step) const;
  AlphaScheduleKind kind() const { return kind_; }
  double start() const { return start_; }
  double end() const { return end_; }
  std::uint64_t anneal_steps() const { return anneal_steps_; }

 private:
  AlphaSchedule(AlphaScheduleKind kind, double start, double end, std::uint64_t steps)
      : kind_(kind), start_(start), end_(end), anneal_steps_(steps) {}
  AlphaScheduleKind kind_;
  double start_;
  double end_;
  std::uint64_t anneal_steps_;
};

double alpha_at(const AlphaSchedule& schedule, std::uint64_t step);

}  // namespace rnp
