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

#include "rnp/trainer/optim.hpp"

#include <algorithm>
#include <cmath>

#include "rnp/errors.hpp"

namespace rnp {

void AdamConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("adam: lr must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("adam: beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("adam: beta2 must lie in [0, 1)");
  if (!(eps > 0.0)) throw ConfigError("adam: eps must be > 0");
}

Adam::Adam(AdamConfig cfg, const std::vector<Tensor>& params) : cfg_(cfg) {
  cfg_.validate();
  for (const Tensor& p : params) {
    state_.m.emplace_back(p.rows(), p.cols(), 0.0);
    state_.v.emplace_back(p.rows(), p.cols(), 0.0);
  }
}

void Adam::step(std::vector<Tensor>& params, const std::vector<Tensor>& grads) {
  if (params.size() != state_.m.size() || grads.size() != params.size()) {
    throw ContractError("adam: parameter count mismatch");
  }
  ++state_.step;
  const double t = static_cast<double>(state_.step);
  const double c1 = 1.0 - std::pow(cfg_.beta1, t);
  const double c2 = 1.0 - std::pow(cfg_.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!grads[i].same_shape(params[i])) throw ContractError("adam: gradient shape mismatch");
    double* p = params[i].values().data();
    double* m = state_.m[i].values().data();
    double* v = state_.v[i].values().data();
    const double* g = grads[i].values().data();
    for (std::size_t j = 0; j < params[i].size(); ++j) {
      m[j] = cfg_.beta1 * m[j] + (1.0 - cfg_.beta1) * g[j];
      v[j] = cfg_.beta2 * v[j] + (1.0 - cfg_.beta2) * g[j] * g[j];
      const double mhat = m[j] / c1;
      const double vhat = v[j] / c2;
      p[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

AlphaSchedule AlphaSchedule::constant(double alpha) {
  if (!(std::isfinite(alpha) && alpha >= 0.0)) {
    throw ConfigError("alpha schedule: alpha must be finite and >= 0");
  }
  return AlphaSchedule(AlphaScheduleKind::Constant, alpha, alpha, 0);
}

AlphaSchedule AlphaSchedule::linear_anneal(double start, double end, std::uint64_t anneal_steps) {
  if (!(start > 0.0 && start < 1.0 && end > 0.0 && end < 1.0)) {
    throw ConfigError("alpha schedule: annealing endpoints must lie in (0, 1)");
  }
  if (!(start >= end)) throw ConfigError("alpha schedule: annealing requires start >= end");
  if (anneal_steps < 1) throw ConfigError("alpha schedule: anneal_steps must be >= 1");
  return AlphaSchedule(AlphaScheduleKind::LinearAnneal, start, end, anneal_steps);
}

double AlphaSchedule::at(std::uint64_t step) const {
  if (kind_ == AlphaScheduleKind::Constant) return start_;
  const double frac = std::min(static_cast<double>(step) / static_cast<double>(anneal_steps_), 1.0);
  return start_ + (end_ - start_) * frac;
}

double alpha_at(const AlphaSchedule& schedule, std::uint64_t step) { return schedule.at(step); }

}  // namespace rnp
