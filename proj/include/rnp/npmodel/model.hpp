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

#include <vector>

#include "rnp/npmodel/params.hpp"
#include "rnp/numkit/tape.hpp"

namespace rnp {

struct DiagGaussian {
  std::vector<double> mean;
  std::vector<double> std;
  std::size_t dim() const { return mean.size(); }
};

struct PredictiveGaussian {
  Tensor mean;  // N×Dy
  Tensor std;   // N×Dy
};

// Parameters placed on a tape, index-aligned with NPParams::values().
struct BoundParams {
  const NPParams* params = nullptr;
  std::vector<Var> vars;
  const ModelConfig& config() const { return params->config(); }
  Var operator[](std::string_view name) const { return vars[params->index_of(name)]; }
};

// Leaves receive gradients; constants are for evaluation only.
BoundParams bind_leaves(Tape& tape, const NPParams& params);
BoundParams bind_constants(Tape& tape, const NPParams& params);

struct LatentVars {
  Var mean;  // 1×Dz
  Var std;   // 1×Dz
};

struct PredictiveVars {
  Var mean;  // (K·N)×Dy, row k·N + n
  Var std;
  std::size_t num_samples = 0;
  std::size_t num_points = 0;
};

// Per-point embeddings h(x_i, y_i), one row per point.
Var encode_points(const BoundParams& p, Var xs, Var ys);
// Pairwise-summed mean of per-point embeddings; 1×embed_dim.
Var encode_set(const BoundParams& p, Var xs, Var ys);
Var pool_embeddings(Var point_embeddings);
LatentVars latent_dist(const BoundParams& p, Var embedding);
// eps is K×Dz; returns K×Dz.
Var reparam_sample(const LatentVars& dist, Var eps);
PredictiveVars decode(const BoundParams& p, Var x_tgt, Var z);
// K×N matrix of per-point log densities, summed over output dimensions.
Var point_log_likelihoods(const PredictiveVars& pred, Var y_tgt);
// K×1 joint log-likelihood of all N targets under each sample.
Var sample_log_likelihoods(const PredictiveVars& pred, Var y_tgt);

struct TaskLatents {
  LatentVars prior;      // q(z | C)
  LatentVars posterior;  // q(z | C ∪ T)
};

// Both latent distributions from one pass of the point encoder.
TaskLatents encode_task(const BoundParams& p, Var x_ctx, Var y_ctx, Var x_tgt, Var y_tgt);

DiagGaussian to_diag(const LatentVars& v);
PredictiveGaussian to_predictive(const PredictiveVars& v, std::size_t sample);

// Value-level conveniences built on a private constant tape.
Tensor encode_set_value(const NPParams& params, const Tensor& xs, const Tensor& ys);
DiagGaussian latent_dist_value(const NPParams& params, const Tensor& embedding);
PredictiveGaussian decode_value(const NPParams& params, const Tensor& x_tgt,
                                std::span<const double> z);

}  // namespace rnp
