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

#include "rnp/numkit/rng.hpp"
#include "rnp/taskgen/task.hpp"

namespace rnp {

// dx/dt = θ1 x - θ2 x y,  dy/dt = -θ3 y + θ4 x y  (x prey, y predator).
struct LVConfig {
  double theta1 = 1.0;
  double theta2 = 0.01;
  double theta3 = 0.5;
  double theta4 = 0.01;
  double x0 = 50.0;
  double y0 = 100.0;
  double horizon = 25.0;
  int grid_size = 256;
  double dt = 0.01;

  void validate() const;
};

struct LVState {
  double prey;
  double predator;
};

LVState lv_derivative(const LVConfig& cfg, LVState s);

// θ4 x - θ3 ln x + θ2 y - θ1 ln y, constant along exact trajectories.
double lv_invariant(const LVConfig& cfg, LVState s);

// Classic RK4 sampled at grid_size equally spaced times on [0, horizon].
// Each grid interval is covered by the fewest equal substeps no longer than
// dt. Returns grid_size × 3 rows of (time, prey, predator). SimulationError if
// a population becomes non-positive at any internal step.
Tensor simulate_lv(const LVConfig& cfg);

// M ~ U{context_min..context_max}, N ~ U{target_min..total_max - M}.
struct LVSplit {
  int context_min = 15;
  int context_max = 85;
  int target_min = 15;
  int total_max = 100;

  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> context;
  std::vector<std::size_t> target;
};

// Draws M and N per the split rule and a disjoint index subset of [0, grid).
// GenerationError when M + N exceeds the grid.
SplitIndices draw_split_indices(std::size_t grid, RngStream& rng, const LVSplit& split);

// Disjoint context/target subsample of a trajectory. x is the z-scored time
// and y the z-scored predator series, both normalized over the full grid.
Task make_lv_task(const Tensor& trajectory, RngStream& rng, const LVSplit& split);

// Per-task simulation settings: θ fixed, initial populations uniform.
struct LVDatasetSpec {
  LVConfig base;
  double init_lo = 50.0;
  double init_hi = 150.0;
};

Task sample_lv_task(const LVDatasetSpec& spec, RngStream& rng, const LVSplit& split);

// (v - mean) / std with the population standard deviation; DomainError on
// zero variance.
std::vector<double> zscore(std::span<const double> v);

}  // namespace rnp
