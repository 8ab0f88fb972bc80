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

#include "rnp/taskgen/dataset.hpp"

#include <fstream>

#include "rnp/errors.hpp"

namespace rnp {

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::GpRbf:
      return "rbf";
    case DatasetKind::GpMatern52:
      return "matern52";
    case DatasetKind::GpPeriodic:
      return "periodic";
    case DatasetKind::LotkaVolterra:
      return "lv";
  }
  return "unknown";
}

DatasetKind parse_dataset_kind(std::string_view name) {
  if (name == "rbf") return DatasetKind::GpRbf;
  if (name == "matern52") return DatasetKind::GpMatern52;
  if (name == "periodic") return DatasetKind::GpPeriodic;
  if (name == "lv") return DatasetKind::LotkaVolterra;
  throw ConfigError("unknown dataset kind '" + std::string(name) + "'");
}

nlohmann::json to_json(const DatasetSpec& spec) {
  const auto& g = spec.gp;
  const auto& lv = spec.lv.base;
  return {
      {"kind", to_string(spec.kind)},
      {"gp",
       {{"scale", {g.scale_lo, g.scale_hi}},
        {"lengthscale", {g.lengthscale_lo, g.lengthscale_hi}},
        {"periodic_lengthscale", {g.periodic_lengthscale_lo, g.periodic_lengthscale_hi}},
        {"period", {g.period_lo, g.period_hi}},
        {"jitter", g.jitter}}},
      {"gp_split",
       {{"context", {spec.gp_split.context_min, spec.gp_split.context_max}},
        {"target_min", spec.gp_split.target_min},
        {"total_max", spec.gp_split.total_max},
        {"x_range", {spec.gp_split.x_lo, spec.gp_split.x_hi}}}},
      {"lv",
       {{"theta", {lv.theta1, lv.theta2, lv.theta3, lv.theta4}},
        {"init", {spec.lv.init_lo, spec.lv.init_hi}},
        {"horizon", lv.horizon},
        {"grid_size", lv.grid_size},
        {"dt", lv.dt}}},
      {"lv_split",
       {{"context", {spec.lv_split.context_min, spec.lv_split.context_max}},
        {"target_min", spec.lv_split.target_min},
        {"total_max", spec.lv_split.total_max}}},
      {"corrupt_beta", spec.corrupt_beta},
  };
}

namespace {

KernelFamily family_of(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::GpRbf:
      return KernelFamily::RBF;
    case DatasetKind::GpMatern52:
      return KernelFamily::Matern52;
    case DatasetKind::GpPeriodic:
      return KernelFamily::Periodic;
    case DatasetKind::LotkaVolterra:
      break;
  }
  throw DomainError("dataset kind has no kernel");
}

}  // namespace

Task generate_task(const DatasetSpec& spec, std::uint64_t seed, std::string_view split,
                   std::uint64_t index) {
  RngStream rng(seed, std::string("task/") + std::string(split), index);
  Task task;
  if (spec.kind == DatasetKind::LotkaVolterra) {
    task = sample_lv_task(spec.lv, rng, spec.lv_split);
  } else {
    const KernelSpec kernel = spec.gp.draw(family_of(spec.kind), rng);
    task = sample_gp_task(kernel, rng, spec.gp_split);
  }
  if (spec.corrupt_beta > 0.0) {
    RngStream noise = rng.child("corrupt");
    task = corrupt_context(task, CorruptionSpec{spec.corrupt_beta}, noise);
  }
  return task;
}

std::vector<Task> generate_tasks(const DatasetSpec& spec, std::uint64_t seed,
                                 std::string_view split, std::size_t count) {
  std::vector<Task> tasks;
  tasks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) tasks.push_back(generate_task(spec, seed, split, i));
  return tasks;
}

void write_dataset_cache(const std::filesystem::path& dir, const DatasetSpec& spec,
                         std::uint64_t seed, std::string_view split,
                         const std::vector<Task>& tasks) {
  std::filesystem::create_directories(dir);
  const std::string name(split);
  write_tasks_jsonl(dir / (name + ".jsonl"), tasks);
  nlohmann::json manifest{{"format", "rnp-tasks-jsonl/1"},
                          {"spec", to_json(spec)},
                          {"seed", seed},
                          {"split", name},
                          {"count", tasks.size()}};
  std::ofstream out(dir / (name + ".manifest.json"));
  if (!out) throw IoError("cannot write dataset manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

}  // namespace rnp
