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

#include "rnp/trainer/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rnp/errors.hpp"
#include "rnp/npmodel/checkpoint.hpp"
#include "rnp/numkit/ops.hpp"
#include "rnp/numkit/rng.hpp"
#include "rnp/version.hpp"

namespace rnp {

void TrainConfig::validate() const {
  model.validate();
  objective.validate();
  adam.validate();
  if (steps < 1) throw ConfigError("trainer: steps must be >= 1");
  if (batch_tasks < 1) throw ConfigError("trainer: batch_tasks must be >= 1");
  if (eval_samples < 1) throw ConfigError("trainer: eval_samples must be >= 1");
  if (fixed_tasks.empty() && val_tasks < 1) throw ConfigError("trainer: val_tasks must be >= 1");
}

namespace {

// Extremes of the per-sample log-weights (likelihood terms for prior-sampled
// objectives) over a batch, recomputed for failure reports.
std::string weight_diagnostics(const NPParams& params, std::span<const Task> batch,
                               const ObjectiveSpec& spec, std::uint64_t seed, std::uint64_t step) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::ostringstream os;
  try {
    for (std::size_t b = 0; b < batch.size(); ++b) {
      Tape tape;
      const BoundParams p = bind_constants(tape, params);
      const TaskVars t = bind_task(tape, batch[b]);
      RngStream rng(seed, "eps", step, b);
      const bool posterior = spec.kind == ObjectiveKind::VI || spec.kind == ObjectiveKind::RNP_VI;
      LatentPaths paths = latent_paths(
          p, t, posterior ? PosteriorInput::CONTEXT_AND_TARGET : PosteriorInput::CONTEXT_ONLY);
      Var z = reparam_sample(posterior ? paths.posterior : paths.prior,
                             tape.constant(draw_eps(rng, spec.num_samples,
                                                    params.config().latent_dim)));
      Var lw = importance_log_weights(p, t, paths, z);
      for (double v : lw.value().values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    os << "min log-weight " << lo << ", max log-weight " << hi;
  } catch (const Error& e) {
    os << "diagnostics unavailable: " << e.what();
  }
  return os.str();
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const StepCallback& on_step) {
  cfg.validate();
  std::vector<Task> pool = cfg.fixed_tasks;
  if (pool.empty() && cfg.train_pool > 0) {
    pool = generate_tasks(cfg.dataset, cfg.seed, "train", cfg.train_pool);
  }
  const std::vector<Task> val =
      cfg.fixed_tasks.empty() ? generate_tasks(cfg.dataset, cfg.seed, "val", cfg.val_tasks)
                              : cfg.fixed_tasks;
  const std::string dataset_name =
      cfg.fixed_tasks.empty() ? std::string(to_string(cfg.dataset.kind)) : "fixed";

  TrainResult result;
  result.params = init_params(cfg.model, cfg.seed);
  Adam adam(cfg.adam, result.params.values());
  result.losses.reserve(cfg.steps);

  const nlohmann::json meta = {{"config_hash", cfg.config_hash},
                               {"seed", cfg.seed},
                               {"code_version", kCodeVersion},
                               {"exp_id", cfg.exp_id}};
  const auto checkpoint = [&](std::uint64_t step, bool final) {
    ObjectiveSpec spec = cfg.objective;
    if (cfg.alpha_schedule) spec.alpha = cfg.alpha_schedule->at(step);
    const EvalLabels labels{cfg.exp_id + "/step=" + std::to_string(step), dataset_name,
                            to_string(spec.kind), reported_alpha(spec.kind, spec.alpha)};
    MetricsRecord rec =
        eval_marginal_ll(result.params, val, cfg.eval_samples, EvalSplit::Target, cfg.seed, labels);
    result.metrics.push_back(rec);
    if (cfg.out_dir.empty()) return;
    const CheckpointMeta cm{cfg.config_hash, cfg.seed, step};
    const std::filesystem::path path =
        cfg.out_dir / (final ? std::string("ckpt_final") : "ckpt_step" + std::to_string(step));
    save_checkpoint(result.params, cm, path);
    if (final) result.final_checkpoint = path;
    append_metrics_csv(cfg.out_dir / "metrics.csv", std::span(&rec, 1), meta);
  };

  std::vector<Task> batch(cfg.batch_tasks);
  for (std::uint64_t step = 0; step < cfg.steps; ++step) {
    RngStream pick(cfg.seed, "batch", step);
    for (std::size_t b = 0; b < cfg.batch_tasks; ++b) {
      if (pool.empty()) {
        batch[b] = generate_task(cfg.dataset, cfg.seed, "train", step * cfg.batch_tasks + b);
      } else {
        batch[b] = pool[static_cast<std::size_t>(pick.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
      }
    }
    ObjectiveSpec spec = cfg.objective;
    if (cfg.alpha_schedule) spec.alpha = cfg.alpha_schedule->at(step);

    Tape tape;
    const BoundParams p = bind_leaves(tape, result.params);
    double loss = std::numeric_limits<double>::quiet_NaN();
    std::vector<Tensor> grads;
    try {
      Var l = minibatch_loss(p, batch, spec, cfg.seed, step);
      loss = l.value().item();
      if (std::isfinite(loss)) grads = tape.gradient(l, p.vars);
    } catch (const NumericError& e) {
      throw TrainingError("step " + std::to_string(step) + " (" + to_string(spec.kind) +
                          "): " + e.what());
    }
    bool finite = std::isfinite(loss);
    for (const Tensor& g : grads) finite = finite && g.all_finite();
    if (!finite) {
      throw TrainingError("non-finite loss at step " + std::to_string(step) + " (" +
                          to_string(spec.kind) + ", alpha " + format_double(spec.alpha) + "): " +
                          weight_diagnostics(result.params, batch, spec, cfg.seed, step));
    }
    adam.step(result.params.values(), grads);
    result.losses.push_back(loss);
    if (on_step) on_step(step, loss);
    const std::uint64_t done = step + 1;
    if (cfg.checkpoint_interval > 0 && done % cfg.checkpoint_interval == 0 && done < cfg.steps) {
      checkpoint(done, false);
    }
  }
  checkpoint(cfg.steps, true);
  return result;
}

}  // namespace rnp
