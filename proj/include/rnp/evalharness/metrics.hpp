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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rnp/npmodel/params.hpp"
#include "rnp/taskgen/task.hpp"

namespace rnp {

enum class EvalSplit { Context, Target };
std::string to_string(EvalSplit split);

struct MetricsRecord {
  std::string exp_id;
  std::string dataset;
  std::string objective;
  double alpha = 0.0;
  std::size_t num_samples = 0;
  EvalSplit split = EvalSplit::Target;
  double ll_mean = 0.0;
  double ll_std = 0.0;
  std::size_t n_tasks = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

// Columns: exp_id,dataset,objective,alpha,K,split,ll_mean,ll_std,n_tasks,seed,wall_seconds
std::string metrics_csv_header();
// Floats carry 17 significant digits.
std::string to_csv_row(const MetricsRecord& r);
std::string format_double(double v);

// Appends rows, writing the header first when the file is new or empty. The
// sidecar <path>.meta.json holds `meta` (config hash, seed, code version).
void append_metrics_csv(const std::filesystem::path& path, std::span<const MetricsRecord> rows,
                        const nlohmann::json& meta);
std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path);

// Per-task log-mean-exp estimate of log p(Y|X, C) with z_k ~ q(z|C), divided
// by (points × Dy). Split Context predicts Y_C from C itself. Task i draws
// eps from RngStream(seed, "eval", i).
std::vector<double> task_log_likelihoods(const NPParams& params, std::span<const Task> tasks,
                                         std::size_t num_samples, EvalSplit split,
                                         std::uint64_t seed);

struct EvalLabels {
  std::string exp_id;
  std::string dataset;
  std::string objective;
  double alpha = 0.0;
};

// Mean and sample standard deviation over tasks. DomainError on no tasks.
MetricsRecord eval_marginal_ll(const NPParams& params, std::span<const Task> tasks,
                               std::size_t num_samples, EvalSplit split, std::uint64_t seed,
                               const EvalLabels& labels = {});

}  // namespace rnp
