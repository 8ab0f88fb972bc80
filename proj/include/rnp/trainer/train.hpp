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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rnp/evalharness/metrics.hpp"
#include "rnp/npmodel/params.hpp"
#include "rnp/objectives/losses.hpp"
#include "rnp/taskgen/dataset.hpp"
#include "rnp/trainer/optim.hpp"

namespace rnp {

struct TrainConfig {
  DatasetSpec dataset;
  ModelConfig model;
  ObjectiveSpec objective;
  // Overrides objective.alpha step by step when set.
  std::optional<AlphaSchedule> alpha_schedule;
  AdamConfig adam;
  std::size_t batch_tasks = 16;
  std::size_t steps = 20000;
  // Size of the fixed training pool; 0 draws a fresh task for every slot.
  std::size_t train_pool = 10000;
  std::size_t val_tasks = 64;
  std::size_t eval_samples = 50;
  // Validation and checkpoint every this many steps; 0 only at the end.
  std::size_t checkpoint_interval = 0;
  std::uint64_t seed = 0;
  // Train on these tasks instead of the generated pool (validation too).
  std::vector<Task> fixed_tasks;
  std::filesystem::path out_dir;  // empty: no files written
  std::string exp_id = "train";
  std::string config_hash;

  void validate() const;
};

struct TrainResult {
  NPParams params;
  std::vector<double> losses;  // one per step
  std::vector<MetricsRecord> metrics;
  std::filesystem::path final_checkpoint;
};

using StepCallback = std::function<void(std::uint64_t step, double loss)>;

// Deterministic in cfg: batch b of step s is index RngStream(seed, "batch", s)
// draws into the pool, eps comes from RngStream(seed, "eps", s, b), and
// parameters are initialised from seed.
TrainResult train(const TrainConfig& cfg, const StepCallback& on_step = {});

}  // namespace rnp
