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
#include <vector>

#include "rnp/taskgen/task.hpp"

namespace rnp {

// Raw annual series from a `year,hare,lynx` CSV. Tasks use year and lynx
// only; the hare column is optional and left empty when absent.
struct HareLynxSeries {
  std::vector<double> year;
  std::vector<double> hare;
  std::vector<double> lynx;

  std::size_t size() const { return year.size(); }
};

// Header must name the columns year and lynx, optionally hare (any order);
// every cell numeric; at least 2 rows. IngestionError naming the file line
// otherwise.
HareLynxSeries read_hare_lynx(const std::filesystem::path& path);

struct HareLynxSplit {
  std::size_t num_context = 30;
  std::uint64_t seed = 0;
};

// Whole series as one Task: x = z-scored year, y = z-scored lynx count.
// num_context points chosen uniformly without replacement form the context;
// the remaining points are the targets. IngestionError on zero variance.
Task hare_lynx_task(const HareLynxSeries& series, const HareLynxSplit& split);

Task load_hare_lynx(const std::filesystem::path& path, const HareLynxSplit& split = {});

// Several random context/target splits of the same series, M ~ U{lo..hi}.
std::vector<Task> hare_lynx_tasks(const HareLynxSeries& series, std::size_t count,
                                  std::size_t context_min, std::size_t context_max,
                                  std::uint64_t seed);

}  // namespace rnp
