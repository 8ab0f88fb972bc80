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

#include "rnp/taskgen/lotka_volterra.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "rnp/errors.hpp"

namespace rnp {

void LVConfig::validate() const {
  if (!(theta1 > 0 && theta2 > 0 && theta3 > 0 && theta4 > 0)) {
    throw DomainError("LVConfig: rate parameters must be positive");
  }
  if (!(x0 > 0 && y0 > 0)) throw DomainError("LVConfig: initial populations must be positive");
  if (!(horizon > 0)) throw DomainError("LVConfig: horizon must be positive");
  if (grid_size < 2) throw DomainError("LVConfig: grid_size must be >= 2");
  if (!(dt > 0) || dt > horizon / grid_size) {
    throw DomainError("LVConfig: dt must be in (0, horizon/grid_size]");
  }
}

LVState lv_derivative(const LVConfig& cfg, LVState s) {
  return {cfg.theta1 * s.prey - cfg.theta2 * s.prey * s.predator,
          -cfg.theta3 * s.predator + cfg.theta4 * s.prey * s.predator};
}

double lv_invariant(const LVConfig& cfg, LVState s) {
  return cfg.theta4 * s.prey - cfg.theta3 * std::log(s.prey) + cfg.theta2 * s.predator -
         cfg.theta1 * std::log(s.predator);
}

namespace {

LVState rk4_step(const LVConfig& cfg, LVState s, double h) {
  const auto shifted = [](LVState a, LVState d, double f) {
    return LVState{a.prey + f * d.prey, a.predator + f * d.predator};
  };
  const LVState k1 = lv_derivative(cfg, s);
  const LVState k2 = lv_derivative(cfg, shifted(s, k1, 0.5 * h));
  const LVState k3 = lv_derivative(cfg, shifted(s, k2, 0.5 * h));
  const LVState k4 = lv_derivative(cfg, shifted(s, k3, h));
  return {s.prey + h / 6.0 * (k1.prey + 2.0 * k2.prey + 2.0 * k3.prey + k4.prey),
          s.predator +
              h / 6.0 * (k1.predator + 2.0 * k2.predator + 2.0 * k3.predator + k4.predator)};
}

}  // namespace

Tensor simulate_lv(const LVConfig& cfg) {
  cfg.validate();
  const auto g = static_cast<std::size_t>(cfg.grid_size);
  const double spacing = cfg.horizon / static_cast<double>(g - 1);
  const int substeps = static_cast<int>(std::ceil(spacing / cfg.dt - 1e-9));
  const double h = spacing / substeps;
  Tensor traj(g, 3);
  LVState s{cfg.x0, cfg.y0};
  traj(0, 0) = 0.0;
  traj(0, 1) = s.prey;
  traj(0, 2) = s.predator;
  for (std::size_t i = 1; i < g; ++i) {
    for (int k = 0; k < substeps; ++k) {
      s = rk4_step(cfg, s, h);
      if (!(s.prey > 0.0) || !(s.predator > 0.0)) {
        throw SimulationError("Lotka-Volterra population became non-positive near t=" +
                              std::to_string(spacing * static_cast<double>(i - 1) + h * (k + 1)));
      }
    }
    traj(i, 0) = spacing * static_cast<double>(i);
    traj(i, 1) = s.prey;
    traj(i, 2) = s.predator;
  }
  return traj;
}

void LVSplit::validate() const {
  if (context_min < 1 || context_max < context_min) {
    throw DomainError("LVSplit: invalid context range");
  }
  if (target_min < 1 || context_max + target_min > total_max) {
    throw DomainError("LVSplit: total_max leaves no room for targets");
  }
}

std::vector<double> zscore(std::span<const double> v) {
  if (v.empty()) throw DomainError("zscore: empty series");
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 0.0)) throw DomainError("zscore: zero variance");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
  return out;
}

SplitIndices draw_split_indices(std::size_t grid, RngStream& rng, const LVSplit& split) {
  split.validate();
  const auto m = static_cast<std::size_t>(rng.uniform_int(split.context_min, split.context_max));
  const auto n = static_cast<std::size_t>(
      rng.uniform_int(split.target_min, split.total_max - static_cast<int>(m)));
  if (m + n > grid) {
    throw GenerationError("make_lv_task: " + std::to_string(m + n) +
                          " points requested from a grid of " + std::to_string(grid));
  }
  // Partial Fisher–Yates: the first m + n entries are a uniform draw without
  // replacement.
  std::vector<std::size_t> idx(grid);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m + n; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(grid - 1)));
    std::swap(idx[i], idx[j]);
  }
  return {std::vector<std::size_t>(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m)),
          std::vector<std::size_t>(idx.begin() + static_cast<std::ptrdiff_t>(m),
                                   idx.begin() + static_cast<std::ptrdiff_t>(m + n))};
}

Task make_lv_task(const Tensor& trajectory, RngStream& rng, const LVSplit& split) {
  const std::size_t g = trajectory.rows();
  if (g < 200 || trajectory.cols() != 3) {
    throw GenerationError("make_lv_task: trajectory needs >= 200 rows of (t, prey, predator)");
  }
  std::vector<double> t(g), pred(g);
  for (std::size_t i = 0; i < g; ++i) {
    t[i] = trajectory(i, 0);
    pred[i] = trajectory(i, 2);
  }
  const std::vector<double> xs = zscore(t);
  const std::vector<double> ys = zscore(pred);
  const SplitIndices split_idx = draw_split_indices(g, rng, split);
  const std::size_t m = split_idx.context.size();
  const std::size_t n = split_idx.target.size();
  Task task{Tensor(m, 1), Tensor(m, 1), Tensor(n, 1), Tensor(n, 1)};
  for (std::size_t i = 0; i < m; ++i) {
    task.x_ctx[i] = xs[split_idx.context[i]];
    task.y_ctx[i] = ys[split_idx.context[i]];
  }
  for (std::size_t i = 0; i < n; ++i) {
    task.x_tgt[i] = xs[split_idx.target[i]];
    task.y_tgt[i] = ys[split_idx.target[i]];
  }
  return task;
}

Task sample_lv_task(const LVDatasetSpec& spec, RngStream& rng, const LVSplit& split) {
  LVConfig cfg = spec.base;
  cfg.x0 = rng.uniform(spec.init_lo, spec.init_hi);
  cfg.y0 = rng.uniform(spec.init_lo, spec.init_hi);
  return make_lv_task(simulate_lv(cfg), rng, split);
}

}  // namespace rnp
