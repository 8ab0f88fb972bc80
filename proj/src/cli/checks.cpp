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

#include <cmath>
#include <cstdio>
#include <sstream>

#include "rnp/cli/app.hpp"
#include "rnp/evalharness/metrics.hpp"
#include "rnp/numkit/gradcheck.hpp"
#include "rnp/oracles/renyi_gaussian.hpp"

namespace rnp {

void CheckOutcome::record(bool pass, const std::string& line) {
  lines.push_back((pass ? "PASS " : "FAIL ") + line);
  if (!pass && ok) {
    ok = false;
    reason = line;
  }
}

namespace {

ModelConfig tiny_model() {
  ModelConfig m;
  m.hidden = 8;
  m.embed_dim = 8;
  m.latent_dim = 4;
  return m;
}

Task tiny_task(std::uint64_t seed, std::uint64_t index) {
  DatasetSpec spec;
  spec.gp_split = {3, 3, 2, 5, -2.0, 2.0};
  return generate_task(spec, seed, "gradcheck", index);
}

double normwise_rel(const std::vector<Tensor>& a, const std::vector<Tensor>& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      num += (a[i][j] - b[i][j]) * (a[i][j] - b[i][j]);
      den += b[i][j] * b[i][j];
    }
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

std::string kv(const char* key, double v) { return std::string(key) + "=" + format_double(v); }

}  // namespace

CheckOutcome run_gradcheck_suite(std::uint64_t seed) {
  CheckOutcome out;
  constexpr std::size_t kSamples = 4;
  double worst_identity = 0.0;
  for (std::uint64_t i = 0; i < 5; ++i) {
    const NPParams params = init_params(tiny_model(), seed + i);
    const Task task = tiny_task(seed, i);
    for (double alpha : {0.0, 0.3, 0.7, 1.5}) {
      RngStream rng(seed, "gradcheck/eps", i);
      RngStream replay = rng;
      const Tensor eps = draw_eps(replay, kSamples, params.config().latent_dim);
      Tape tape;
      const BoundParams p = bind_leaves(tape, params);
      Var loss = loss_rnp_vi(p, bind_task(tape, task), alpha, kSamples, rng);
      const std::vector<Tensor> autodiff = tape.gradient(loss, p.vars);
      const std::vector<Tensor> explicit_grad = rnp_vi_gradient_explicit(params, task, alpha, eps);
      worst_identity = std::max(worst_identity, normwise_rel(autodiff, explicit_grad));
    }
  }
  out.record(worst_identity < 1e-8, "weight_identity " + kv("max_rel_error", worst_identity) +
                                        " tol=1e-8");

  double worst_fd = 0.0;
  for (ObjectiveKind kind : {ObjectiveKind::VI, ObjectiveKind::ML_EXPECTED,
                             ObjectiveKind::ML_MARGINAL, ObjectiveKind::RNP_VI,
                             ObjectiveKind::RNP_ML_TASK, ObjectiveKind::RNP_ML_LITERAL}) {
    const NPParams params = init_params(tiny_model(), seed + 100);
    const Task task = tiny_task(seed, 100);
    ObjectiveSpec spec;
    spec.kind = kind;
    spec.num_samples = 3;
    const TapeFunction f = [&](Tape& tape, std::span<const Var> vars) {
      BoundParams p{&params, std::vector<Var>(vars.begin(), vars.end())};
      RngStream rng(seed, "gradcheck/fd");
      return task_loss(p, bind_task(tape, task), spec, rng);
    };
    const GradCheckReport r = finite_diff_check(f, params.values(), 1e-6);
    worst_fd = std::max(worst_fd, r.max_rel_error);
    out.record(r.ok(1e-4), "finite_difference objective=" + to_string(kind) + " " +
                               kv("max_rel_error", r.max_rel_error) + " tol=1e-4");
  }
  out.lines.push_back("gradcheck " + kv("max_rel_error", std::max(worst_fd, worst_identity)));
  return out;
}

CheckOutcome run_oracle_suite(std::uint64_t seed) {
  CheckOutcome out;
  const Cov2 corr{1.0, 0.6, 1.0};
  out.record(rho_alpha(corr, 1.0) == 1.0, "rho_alpha_at_one " + kv("value", rho_alpha(corr, 1.0)));
  out.record(rho_alpha({2.0, 0.0, 3.0}, 0.3) == 1.0,
             "rho_alpha_uncorrelated " + kv("value", rho_alpha({2.0, 0.0, 3.0}, 0.3)));
  out.record(std::fabs(rho_alpha(corr, 0.5) - 0.8) < 1e-15,
             "rho_alpha_r2_036 " + kv("value", rho_alpha(corr, 0.5)));

  RngStream rng(seed, "oracle/cov");
  std::size_t violations = 0;
  for (int i = 0; i < 100; ++i) {
    const double s11 = rng.uniform(0.1, 3.0);
    const double s22 = rng.uniform(0.1, 3.0);
    const double r = rng.uniform(-0.99, 0.99);
    const Cov2 c{s11, r * std::sqrt(s11 * s22), s22};
    double prev = rho_alpha(c, 0.01);
    for (int a = 2; a <= 100; ++a) {
      const double cur = rho_alpha(c, a / 100.0);
      if (cur < prev) ++violations;
      prev = cur;
    }
  }
  out.record(violations == 0, "rho_alpha_monotone violations=" + std::to_string(violations));

  const Cov2 inv = corr.inverse();
  double prev_ratio = 0.0;
  for (double alpha : {0.2, 0.5, 0.8}) {
    const RenyiFit fit = fit_renyi_factorized(corr, alpha, {.seed = seed});
    const double ratio = fit.precision[0] / inv.s11;
    const double rho = rho_alpha(corr, alpha);
    const bool pass = fit.converged && std::fabs(ratio / rho - 1.0) < 0.01 && ratio >= prev_ratio;
    out.record(pass, "renyi_fit alpha=" + format_double(alpha) + " " + kv("precision_ratio", ratio) +
                         " " + kv("rho", rho) + " converged=" + (fit.converged ? "1" : "0"));
    prev_ratio = ratio;
  }
  const RenyiFit diag = fit_renyi_factorized({2.0, 0.0, 0.5}, 0.5, {.seed = seed});
  out.record(diag.converged && std::fabs(diag.variance[0] / 2.0 - 1.0) < 0.01 &&
                 std::fabs(diag.variance[1] / 0.5 - 1.0) < 0.01,
             "renyi_fit_uncorrelated " + kv("v1", diag.variance[0]) + " " + kv("v2", diag.variance[1]));
  const RenyiFit kl = fit_renyi_factorized(corr, 0.999, {.seed = seed});
  out.record(kl.converged && std::fabs(kl.precision[0] / inv.s11 - 1.0) < 0.01 &&
                 std::fabs(kl.precision[1] / inv.s22 - 1.0) < 0.01,
             "renyi_fit_kl_limit " + kv("precision_ratio", kl.precision[0] / inv.s11));
  return out;
}

}  // namespace rnp
