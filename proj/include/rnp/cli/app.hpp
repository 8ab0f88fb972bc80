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
#include <string>
#include <vector>

#include "rnp/cli/config.hpp"
#include "rnp/objectives/losses.hpp"
#include "rnp/taskgen/dataset.hpp"
#include "rnp/trainer/train.hpp"

namespace rnp {

DatasetSpec dataset_from_config(const RunConfig& cfg);
ModelConfig model_from_config(const RunConfig& cfg);
ObjectiveSpec objective_from_config(const RunConfig& cfg);
TrainConfig train_config_from(const RunConfig& cfg);
std::vector<std::uint64_t> eval_seeds(const RunConfig& cfg);

struct CheckOutcome {
  bool ok = true;
  std::vector<std::string> lines;  // one "PASS|FAIL name key=value ..." line per check
  std::string reason;              // first failure, machine-parsable
  void record(bool pass, const std::string& line);
};

// Explicit self-normalised-weight gradient vs autodiff, and autodiff vs
// central differences for every objective, on small random tasks.
CheckOutcome run_gradcheck_suite(std::uint64_t seed);
// Closed-form ρ_α values and monotonicity, and the factorised Rényi fit.
CheckOutcome run_oracle_suite(std::uint64_t seed);

// Entry point of the rnp executable. Exit 0 success, 1 failed check or
// runtime error, 2 configuration error.
int run_cli(int argc, char** argv);

}  // namespace rnp
