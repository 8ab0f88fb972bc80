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

#include "rnp/objectives/losses.hpp"

#include <cmath>

#include "rnp/errors.hpp"
#include "rnp/numkit/logspace.hpp"
#include "rnp/numkit/ops.hpp"
#include "rnp/objectives/divergence.hpp"

namespace rnp {

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::VI: return "vi";
    case ObjectiveKind::ML_EXPECTED: return "ml_expected";
    case ObjectiveKind::ML_MARGINAL: return "ml_marginal";
    case ObjectiveKind::RNP_VI: return "rnp_vi";
    case ObjectiveKind::RNP_ML_TASK: return "rnp_ml_task";
    case ObjectiveKind::RNP_ML_LITERAL: return "rnp_ml_literal";
  }
  return "?";
}

ObjectiveKind parse_objective_kind(std::string_view name) {
  for (ObjectiveKind k : {ObjectiveKind::VI, ObjectiveKind::ML_EXPECTED, ObjectiveKind::ML_MARGINAL,
                          ObjectiveKind::RNP_VI, ObjectiveKind::RNP_ML_TASK,
                          ObjectiveKind::RNP_ML_LITERAL}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown objective '" + std::string(name) + "'");
}

bool is_renyi(ObjectiveKind kind) {
  return kind == ObjectiveKind::RNP_VI || kind == ObjectiveKind::RNP_ML_TASK ||
         kind == ObjectiveKind::RNP_ML_LITERAL;
}

double reported_alpha(ObjectiveKind kind, double alpha) {
  if (is_renyi(kind)) return alpha;
  return kind == ObjectiveKind::VI ? 1.0 : 0.0;
}

void ObjectiveSpec::validate() const {
  if (num_samples < 1) throw ConfigError("objective: num_samples must be >= 1");
  if (!(alpha_eps > 0.0)) throw ConfigError("objective: alpha_eps must be > 0");
  if (is_renyi(kind) && !(std::isfinite(alpha) && alpha >= 0.0)) {
    throw ConfigError("objective: alpha must be finite and >= 0");
  }
}

TaskVars bind_task(Tape& tape, const Task& task) {
  return {tape.constant(task.x_ctx), tape.constant(task.y_ctx), tape.constant(task.x_tgt),
          tape.constant(task.y_tgt)};
}

LatentPaths latent_paths(const BoundParams& p, const TaskVars& t, PosteriorInput input) {
  if (input == PosteriorInput::CONTEXT_ONLY) {
    const LatentVars prior = latent_dist(p, encode_set(p, t.x_ctx, t.y_ctx));
    return {prior, prior};
  }
  const TaskLatents both = encode_task(p, t.x_ctx, t.y_ctx, t.x_tgt, t.y_tgt);
  return {both.prior, both.posterior};
}

Tensor draw_eps(RngStream& rng, std::size_t num_samples, std::size_t latent_dim) {
  if (num_samples < 1) throw DomainError("num_samples must be >= 1");
  return rng.normal_tensor(num_samples, latent_dim);
}

Var importance_log_weights(const BoundParams& p, const TaskVars& t, const LatentPaths& paths,
                           Var z) {
  Var ll = sample_log_likelihoods(decode(p, t.x_tgt, z), t.y_tgt);
  if (paths.prior.mean.id() == paths.posterior.mean.id() &&
      paths.prior.std.id() == paths.posterior.std.id()) {
    return ll;
  }
  return ad::add(ll, ad::sub(diag_log_density(paths.prior, z), diag_log_density(paths.posterior, z)));
}

Var renyi_bound(Var log_w, double alpha, double alpha_eps) {
  if (!(alpha >= 0.0)) throw DomainError("renyi bound: alpha must be >= 0");
  const double k = static_cast<double>(log_w.rows() * log_w.cols());
  if (std::fabs(alpha - 1.0) < alpha_eps) return ad::scale(ad::sum(log_w), 1.0 / k);
  const double a = 1.0 - alpha;
  return ad::scale(ad::shift(ad::log_sum_exp(ad::scale(log_w, a)), -std::log(k)), 1.0 / a);
}

double renyi_bound(std::span<const double> log_w, double alpha, double alpha_eps) {
  if (!(alpha >= 0.0)) throw DomainError("renyi bound: alpha must be >= 0");
  if (log_w.empty()) throw DomainError("renyi bound: no weights");
  const double k = static_cast<double>(log_w.size());
  if (std::fabs(alpha - 1.0) < alpha_eps) return pairwise_sum(log_w) / k;
  const double a = 1.0 - alpha;
  std::vector<double> scaled(log_w.begin(), log_w.end());
  for (double& v : scaled) v *= a;
  return (log_sum_exp(scaled) - std::log(k)) / a;
}

namespace {

Var sample_from(const LatentVars& dist, const BoundParams& p, std::size_t num_samples,
                RngStream& rng) {
  Tape& tape = *dist.mean.tape();
  return reparam_sample(dist, tape.constant(draw_eps(rng, num_samples, p.config().latent_dim)));
}

}  // namespace

Var loss_vi(const BoundParams& p, const TaskVars& t, std::size_t num_samples, RngStream& rng,
            PosteriorInput input) {
  const LatentPaths paths = latent_paths(p, t, input);
  Var z = sample_from(paths.posterior, p, num_samples, rng);
  Var ll = sample_log_likelihoods(decode(p, t.x_tgt, z), t.y_tgt);
  Var expected = ad::scale(ad::sum(ll), 1.0 / static_cast<double>(num_samples));
  return ad::neg(ad::sub(expected, kl_diag(paths.posterior, paths.prior)));
}

Var loss_rnp_vi(const BoundParams& p, const TaskVars& t, double alpha, std::size_t num_samples,
                RngStream& rng, double alpha_eps, PosteriorInput input) {
  if (!(alpha >= 0.0)) throw DomainError("loss_rnp_vi: alpha must be >= 0");
  const LatentPaths paths = latent_paths(p, t, input);
  Var z = sample_from(paths.posterior, p, num_samples, rng);
  return ad::neg(renyi_bound(importance_log_weights(p, t, paths, z), alpha, alpha_eps));
}

Var loss_ml(const BoundParams& p, const TaskVars& t, std::size_t num_samples, RngStream& rng,
            MlVariant variant) {
  const LatentVars prior = latent_dist(p, encode_set(p, t.x_ctx, t.y_ctx));
  Var z = sample_from(prior, p, num_samples, rng);
  Var ll = sample_log_likelihoods(decode(p, t.x_tgt, z), t.y_tgt);
  const double k = static_cast<double>(num_samples);
  if (variant == MlVariant::EXPECTED) return ad::neg(ad::scale(ad::sum(ll), 1.0 / k));
  return ad::neg(ad::shift(ad::log_sum_exp(ll), -std::log(k)));
}

Var rnp_ml_from_log_marginals(Var log_m, double alpha, RnpMlForm form, double alpha_eps) {
  if (!(alpha >= 0.0)) throw DomainError("loss_rnp_ml: alpha must be >= 0");
  const double n = static_cast<double>(log_m.cols());
  const bool at_limit = std::fabs(alpha - 1.0) < alpha_eps;
  if (at_limit) return ad::scale(ad::sum(log_m), -1.0 / n);
  const double a = 1.0 - alpha;
  if (form == RnpMlForm::LITERAL) {
    return ad::scale(ad::sum(ad::scale(log_m, a)), 1.0 / ((alpha - 1.0) * n));
  }
  return ad::scale(ad::shift(ad::log_sum_exp(ad::scale(log_m, a)), -std::log(n)),
                   1.0 / (alpha - 1.0));
}

Var loss_rnp_ml(const BoundParams& p, const TaskVars& t, double alpha, std::size_t num_samples,
                RngStream& rng, RnpMlForm form, double alpha_eps) {
  if (!(alpha >= 0.0)) throw DomainError("loss_rnp_ml: alpha must be >= 0");
  const LatentVars prior = latent_dist(p, encode_set(p, t.x_ctx, t.y_ctx));
  Var z = sample_from(prior, p, num_samples, rng);
  Var pll = point_log_likelihoods(decode(p, t.x_tgt, z), t.y_tgt);  // K×N
  Var log_m = ad::shift(ad::log_sum_exp_rows(pll), -std::log(static_cast<double>(num_samples)));
  return rnp_ml_from_log_marginals(log_m, alpha, form, alpha_eps);
}

Var task_loss(const BoundParams& p, const TaskVars& t, const ObjectiveSpec& spec,
              RngStream& rng) {
  const std::size_t k = spec.num_samples;
  switch (spec.kind) {
    case ObjectiveKind::VI: return loss_vi(p, t, k, rng);
    case ObjectiveKind::ML_EXPECTED: return loss_ml(p, t, k, rng, MlVariant::EXPECTED);
    case ObjectiveKind::ML_MARGINAL: return loss_ml(p, t, k, rng, MlVariant::MARGINAL);
    case ObjectiveKind::RNP_VI: return loss_rnp_vi(p, t, spec.alpha, k, rng, spec.alpha_eps);
    case ObjectiveKind::RNP_ML_TASK:
      return loss_rnp_ml(p, t, spec.alpha, k, rng, RnpMlForm::TASK, spec.alpha_eps);
    case ObjectiveKind::RNP_ML_LITERAL:
      return loss_rnp_ml(p, t, spec.alpha, k, rng, RnpMlForm::LITERAL, spec.alpha_eps);
  }
  throw ContractError("task_loss: unknown objective");
}

Var minibatch_loss(const BoundParams& p, std::span<const Task> tasks, const ObjectiveSpec& spec,
                   std::uint64_t seed, std::uint64_t step) {
  if (tasks.empty()) throw DomainError("minibatch_loss: empty batch");
  Tape& tape = *p.vars.front().tape();
  Var total;
  for (std::size_t b = 0; b < tasks.size(); ++b) {
    RngStream rng(seed, "eps", step, b);
    Var l = task_loss(p, bind_task(tape, tasks[b]), spec, rng);
    total = total.valid() ? ad::add(total, l) : l;
  }
  return ad::scale(total, 1.0 / static_cast<double>(tasks.size()));
}

std::vector<Tensor> rnp_vi_gradient_explicit(const NPParams& params, const Task& task,
                                             double alpha, const Tensor& eps) {
  const std::size_t k = eps.rows();
  std::vector<double> log_w(k);
  std::vector<std::vector<Tensor>> grads(k);
  for (std::size_t s = 0; s < k; ++s) {
    Tape tape;
    const BoundParams p = bind_leaves(tape, params);
    const TaskVars t = bind_task(tape, task);
    const LatentPaths paths = latent_paths(p, t, PosteriorInput::CONTEXT_AND_TARGET);
    Var z = reparam_sample(paths.posterior, tape.constant(eps.slice_rows(s, 1)));
    Var lw = ad::sum(importance_log_weights(p, t, paths, z));
    log_w[s] = lw.value().item();
    grads[s] = tape.gradient(lw, p.vars);
  }
  std::vector<double> scaled(log_w);
  for (double& v : scaled) v *= (1.0 - alpha);
  const double norm = log_sum_exp(scaled);
  std::vector<Tensor> out;
  for (const Tensor& g : grads.front()) out.emplace_back(g.rows(), g.cols(), 0.0);
  for (std::size_t s = 0; s < k; ++s) {
    const double w = std::exp(scaled[s] - norm);
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < out[i].size(); ++j) out[i][j] -= w * grads[s][i][j];
    }
  }
  return out;
}

}  // namespace rnp
