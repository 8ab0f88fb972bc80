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
#include <vector>

#include "rnp/evalharness/metrics.hpp"
#include "rnp/taskgen/dataset.hpp"

namespace rnp {

enum class SweepKind { Alpha, K, NContext };
std::string to_string(SweepKind kind);
SweepKind parse_sweep_kind(std::string_view name);

// {5, 15, ..., 95} and {1, 8, 16, 32, 50}.
std::vector<double> default_ncontext_grid();
std::vector<double> default_k_grid();
// {0, 0.1, ..., 2.0}; with `restricted` only points strictly inside (0, 1).
std::vector<double> alpha_grid(bool restricted);
std::vector<double> restrict_alpha_grid(const std::vector<double>& grid);

struct SweepConfig {
  SweepKind kind = SweepKind::K;
  std::vector<double> grid;
  bool restrict_alpha = false;
  // Shared checkpoint for K and NCONTEXT sweeps.
  std::filesystem::path checkpoint;
  // ALPHA sweeps: "{alpha}" is replaced by the grid value printed with %g.
  std::string checkpoint_template;
  DatasetSpec dataset;
  std::size_t n_tasks = 64;
  std::size_t num_samples = 50;
  // Targets per task in NCONTEXT sweeps.
  std::size_t ncontext_targets = 50;
  std::vector<std::uint64_t> seeds{0};
  std::string exp_id = "sweep";
  std::string objective;
  double alpha = 0.0;
};

std::filesystem::path alpha_checkpoint_path(const std::string& tmpl, double alpha);

// One record per (grid point, split, seed). Evaluation tasks come from the
// "test" split of `dataset` keyed by each seed.
std::vector<MetricsRecord> run_sweep(const SweepConfig& cfg);

enum class MisspecProtocol { NoisyContext, LvToHareLynx };
std::string to_string(MisspecProtocol p);
MisspecProtocol parse_misspec_protocol(std::string_view name);

struct MisspecConfig {
  MisspecProtocol protocol = MisspecProtocol::NoisyContext;
  std::filesystem::path checkpoint;
  DatasetSpec dataset;
  double beta = 0.3;
  std::filesystem::path hare_lynx_csv;
  std::size_t hare_lynx_context_min = 15;
  std::size_t hare_lynx_context_max = 45;
  std::size_t n_tasks = 64;
  std::size_t num_samples = 50;
  std::vector<std::uint64_t> seeds{0};
  std::string exp_id = "misspec";
  std::string objective;
  double alpha = 0.0;
};

// NoisyContext: target rows at β = 0 and at cfg.beta (contexts corrupted,
// targets clean). LvToHareLynx: context and target rows on held-out LV tasks
// and on Hare–Lynx splits.
std::vector<MetricsRecord> run_misspec_protocol(const MisspecConfig& cfg);

struct PredictionRow {
  double x = 0.0;
  double mean = 0.0;
  double std = 0.0;
  bool is_context = false;
};

// Grid rows carry the K-averaged predictive mean and std; context rows carry
// the observed y in `mean` and 0 in `std`. One-dimensional x and y only.
std::vector<PredictionRow> prediction_dump(const NPParams& params, const Task& task,
                                           std::size_t num_samples, std::size_t grid_points,
                                           double x_lo, double x_hi, std::uint64_t seed);
void write_prediction_dump(const std::filesystem::path& path, std::span<const PredictionRow> rows);
std::vector<PredictionRow> read_prediction_dump(const std::filesystem::path& path);

}  // namespace rnp
