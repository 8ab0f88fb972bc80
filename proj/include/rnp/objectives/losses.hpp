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
#include <span>
#include <string>
#include <string_view>

#include "rnp/npmodel/model.hpp"
#include "rnp/numkit/rng.hpp"
#include "rnp/taskgen/task.hpp"

namespace rnp {

enum class ObjectiveKind { VI, ML_EXPECTED, ML_MARGINAL, RNP_VI, RNP_ML_TASK, RNP_ML_LITERAL };

std::string to_string(ObjectiveKind kind);
ObjectiveKind parse_objective_kind(std::string_view name);
bool is_renyi(ObjectiveKind kind);
// Order recorded in metrics: alpha for Rényi kinds, 1 for VI, 0 for ML.
double reported_alpha(ObjectiveKind kind, double alpha);

// Loss returned by every objective is the negated bound, to be minimized.
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::RNP_VI;
  double alpha = 0.7;
  std::size_t num_samples = 32;
  // Within this distance of α = 1 the exact limit formula replaces 1/(1−α).
  double alpha_eps = 1e-3;

  void validate() const;
};

// Which set the posterior encoder sees. CONTEXT_ONLY makes q(z|C,T) the same
// node as q(z|C), so every density ratio is exactly 1.
enum class PosteriorInput { CONTEXT_AND_TARGET, CONTEXT_ONLY };

struct TaskVars {
  Var x_ctx, y_ctx, x_tgt, y_tgt;
};
TaskVars bind_task(Tape& tape, const Task& task);

struct LatentPaths {
  LatentVars prior;
  LatentVars posterior;
};
LatentPaths latent_paths(const BoundParams& p, const TaskVars& t, PosteriorInput input);

// Standard-normal draws for K latent samples; the only randomness in a loss.
Tensor draw_eps(RngStream& rng, std::size_t num_samples, std::size_t latent_dim);

// log w_k = log p(Y_T|X_T,z_k) + log q(z_k|C) − log q(z_k|C,T); K×1.
Var importance_log_weights(const BoundParams& p, const TaskVars& t, const LatentPaths& paths,
                           Var z);

// B(α) = 1/(1−α)·[lse((1−α)·log w) − ln K]; the sample mean of log w when
// |α − 1| < alpha_eps. log_w is K×1; result 1×1.
Var renyi_bound(Var log_w, double alpha, double alpha_eps);
double renyi_bound(std::span<const double> log_w, double alpha, double alpha_eps);

enum class MlVariant { EXPECTED, MARGINAL };
enum class RnpMlForm { TASK, LITERAL };

// Each loss draws K×Dz eps from rng; identical rng state gives common random
// numbers across calls.
Var loss_vi(const BoundParams& p, const TaskVars& t, std::size_t num_samples, RngStream& rng,
            PosteriorInput input = PosteriorInput::CONTEXT_AND_TARGET);
Var loss_rnp_vi(const BoundParams& p, const TaskVars& t, double alpha, std::size_t num_samples,
                RngStream& rng, double alpha_eps = 1e-3,
                PosteriorInput input = PosteriorInput::CONTEXT_AND_TARGET);
Var loss_ml(const BoundParams& p, const TaskVars& t, std::size_t num_samples, RngStream& rng,
            MlVariant variant);
Var loss_rnp_ml(const BoundParams& p, const TaskVars& t, double alpha, std::size_t num_samples,
                RngStream& rng, RnpMlForm form, double alpha_eps = 1e-3);

// TASK/LITERAL losses from the per-point log marginal estimates log m̂_n (1×N).
Var rnp_ml_from_log_marginals(Var log_m, double alpha, RnpMlForm form, double alpha_eps);

Var task_loss(const BoundParams& p, const TaskVars& t, const ObjectiveSpec& spec,
              RngStream& rng);

// Mean of per-task losses in index order; task b draws eps from
// RngStream(seed, "eps", step, b).
Var minibatch_loss(const BoundParams& p, std::span<const Task> tasks, const ObjectiveSpec& spec,
                   std::uint64_t seed, std::uint64_t step);

// Gradient of the RNP-VI loss assembled as −Σ_k ŵ_k ∇log w_k with
// ŵ = softmax((1−α)·log w), one backward pass per sample. Index-aligned with
// params.values().
std::vector<Tensor> rnp_vi_gradient_explicit(const NPParams& params, const Task& task,
                                             double alpha, const Tensor& eps);

}  // namespace rnp
