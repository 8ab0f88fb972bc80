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
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rnp/taskgen/corruption.hpp"
#include "rnp/taskgen/gp.hpp"
#include "rnp/taskgen/lotka_volterra.hpp"

namespace rnp {

enum class DatasetKind { GpRbf, GpMatern52, GpPeriodic, LotkaVolterra };

std::string_view to_string(DatasetKind kind);
DatasetKind parse_dataset_kind(std::string_view name);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::GpRbf;
  GpHyperprior gp;
  GpSplit gp_split;
  LVDatasetSpec lv;
  LVSplit lv_split;
  // Context corruption applied at generation time (0 = clean).
  double corrupt_beta = 0.0;
};

nlohmann::json to_json(const DatasetSpec& spec);

// Task `index` of the named split. Pure function of (spec, seed, split, index).
Task generate_task(const DatasetSpec& spec, std::uint64_t seed, std::string_view split,
                   std::uint64_t index);

std::vector<Task> generate_tasks(const DatasetSpec& spec, std::uint64_t seed,
                                 std::string_view split, std::size_t count);

// Writes <dir>/<split>.jsonl and <dir>/<split>.manifest.json (spec, seed,
// split, count, format tag).
void write_dataset_cache(const std::filesystem::path& dir, const DatasetSpec& spec,
                         std::uint64_t seed, std::string_view split,
                         const std::vector<Task>& tasks);

}  // namespace rnp
