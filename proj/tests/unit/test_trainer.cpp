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

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "rnp/errors.hpp"
#include "rnp/npmodel/checkpoint.hpp"
#include "rnp/npmodel/model.hpp"
#include "rnp/trainer/train.hpp"
#include "support.hpp"

using namespace rnp;

namespace {

ModelConfig small_model() {
  ModelConfig m;
  m.hidden = 16;
  m.embed_dim = 16;
  m.latent_dim = 4;
  return m;
}

Task fixed_task() {
  DatasetSpec spec;
  spec.gp_split = {5, 5, 10, 15, -2.0, 2.0};
  return generate_task(spec, 3, "trainer", 0);
}

TrainConfig overfit_config(ObjectiveKind kind, double alpha, std::size_t steps) {
  TrainConfig cfg;
  cfg.model = small_model();
  cfg.objective.kind = kind;
  cfg.objective.alpha = alpha;
  cfg.objective.num_samples = 8;
  cfg.adam.lr = 5e-3;
  cfg.batch_tasks = 1;
  cfg.steps = steps;
  cfg.eval_samples = 4;
  cfg.seed = 5;
  cfg.fixed_tasks = {fixed_task()};
  return cfg;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("adam matches a ten-step scalar trace") {
  AdamConfig cfg;
  cfg.lr = 0.1;
  std::vector<Tensor> params{Tensor::scalar(1.5)};
  Adam adam(cfg, params);
  double theta = 1.5, m = 0.0, v = 0.0;
  for (int t = 1; t <= 10; ++t) {
    // Gradient of θ² + sin θ at the current point.
    const double g = 2 * params[0].item() + std::cos(params[0].item());
    adam.step(params, {Tensor::scalar(g)});
    const double gh = 2 * theta + std::cos(theta);
    m = 0.9 * m + 0.1 * gh;
    v = 0.999 * v + 0.001 * gh * gh;
    const double mh = m / (1 - std::pow(0.9, t)), vh = v / (1 - std::pow(0.999, t));
    theta -= 0.1 * mh / (std::sqrt(vh) + 1e-8);
    CHECK(std::fabs(params[0].item() - theta) < 1e-12);
  }
  CHECK(adam.state().step == 10);
  // First step moves by lr·sign(g) up to ε.
  std::vector<Tensor> p2{Tensor::scalar(0.0)};
  Adam first(cfg, p2);
  first.step(p2, {Tensor::scalar(-3.0)});
  CHECK(p2[0].item() == doctest::Approx(0.1).epsilon(1e-8));
}

TEST_CASE("adam rejects invalid settings and mismatched gradients") {
  AdamConfig bad;
  bad.lr = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.beta2 = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  std::vector<Tensor> params{Tensor(2, 2, 0.0)};
  Adam adam({}, params);
  CHECK_THROWS_AS(adam.step(params, {Tensor(1, 2, 0.0)}), ContractError);
  CHECK_THROWS_AS(adam.step(params, {}), ContractError);
}

TEST_CASE("alpha schedule values") {
  const AlphaSchedule s = AlphaSchedule::linear_anneal(0.999, 0.7, 1000);
  CHECK(alpha_at(s, 0) == 0.999);
  CHECK(alpha_at(s, 500) == doctest::Approx(0.8495).epsilon(1e-14));
  CHECK(alpha_at(s, 1000) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(alpha_at(s, 5000) == doctest::Approx(0.7).epsilon(1e-15));
  double prev = 1.0;
  for (std::uint64_t step = 0; step <= 1200; step += 50) {
    CHECK(alpha_at(s, step) <= prev);
    prev = alpha_at(s, step);
  }
  const AlphaSchedule c = AlphaSchedule::constant(0.3);
  CHECK(alpha_at(c, 0) == 0.3);
  CHECK(alpha_at(c, 123456) == 0.3);
}

TEST_CASE("invalid alpha schedules fail at construction") {
  CHECK_THROWS_AS(AlphaSchedule::linear_anneal(0.5, 0.7, 100), ConfigError);
  CHECK_THROWS_AS(AlphaSchedule::linear_anneal(1.0, 0.7, 100), ConfigError);
  CHECK_THROWS_AS(AlphaSchedule::linear_anneal(0.9, 0.0, 100), ConfigError);
  CHECK_THROWS_AS(AlphaSchedule::linear_anneal(0.9, 0.7, 0), ConfigError);
  CHECK_THROWS_AS(AlphaSchedule::constant(-1.0), ConfigError);
}

TEST_CASE("train config validation") {
  TrainConfig cfg = overfit_config(ObjectiveKind::VI, 1.0, 0);
  CHECK_THROWS_AS(train(cfg), ConfigError);
  cfg.steps = 1;
  cfg.batch_tasks = 0;
  CHECK_THROWS_AS(train(cfg), ConfigError);
}

TEST_CASE("200 steps on one task reduce every objective") {
  for (ObjectiveKind kind : {ObjectiveKind::VI, ObjectiveKind::ML_EXPECTED, ObjectiveKind::ML_MARGINAL,
                             ObjectiveKind::RNP_VI, ObjectiveKind::RNP_ML_TASK,
                             ObjectiveKind::RNP_ML_LITERAL}) {
    const double alpha = kind == ObjectiveKind::RNP_VI ? 0.7 : 0.3;
    const TrainResult r = train(overfit_config(kind, alpha, 200));
    REQUIRE(r.losses.size() == 200);
    const std::span<const double> all(r.losses);
    const double first = mean_of(all.first(10)), last = mean_of(all.last(10));
    CHECK_MESSAGE(last < first, to_string(kind) << " first " << first << " last " << last);
    REQUIRE(r.metrics.size() == 1);
    CHECK(std::isfinite(r.metrics[0].ll_mean));
  }
}

TEST_CASE("identical configs give bitwise-identical checkpoints and metrics") {
  const auto run = [](const std::string& name) {
    TrainConfig cfg = overfit_config(ObjectiveKind::RNP_VI, 0.7, 30);
    cfg.fixed_tasks.clear();
    cfg.train_pool = 32;
    cfg.val_tasks = 4;
    cfg.batch_tasks = 2;
    cfg.checkpoint_interval = 10;
    cfg.out_dir = testing::scratch_dir(name);
    cfg.exp_id = "det";
    train(cfg);
    return cfg.out_dir;
  };
  const auto a = run("trainer_det_a"), b = run("trainer_det_b");
  for (const char* f : {"ckpt_step10", "ckpt_step20", "ckpt_final"}) {
    REQUIRE(std::filesystem::exists(a / f));
    CHECK(testing::read_bytes(a / f) == testing::read_bytes(b / f));
  }
  CHECK_FALSE(std::filesystem::exists(a / "ckpt_step30"));
  // Metrics rows match apart from wall time.
  const auto strip = [](std::string text) {
    std::string out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
  };
  const std::string ma = testing::read_bytes(a / "metrics.csv");
  CHECK(strip(ma) == strip(testing::read_bytes(b / "metrics.csv")));
  CHECK(std::count(ma.begin(), ma.end(), '\n') == 4);
}

TEST_CASE("alpha exactly 1 trains through the limit branch") {
  const TrainResult r = train(overfit_config(ObjectiveKind::RNP_VI, 1.0, 20));
  CHECK(r.losses.size() == 20);
  for (double l : r.losses) CHECK(std::isfinite(l));
  CHECK(r.metrics[0].alpha == 1.0);
}

TEST_CASE("annealed schedule drives the objective alpha") {
  TrainConfig cfg = overfit_config(ObjectiveKind::RNP_VI, 0.7, 20);
  cfg.alpha_schedule = AlphaSchedule::linear_anneal(0.999, 0.5, 10);
  const TrainResult r = train(cfg);
  CHECK(r.metrics.back().alpha == doctest::Approx(0.5).epsilon(1e-15));
  for (double l : r.losses) CHECK(std::isfinite(l));
}

TEST_CASE("the prior path never reads target labels") {
  const NPParams params = init_params(small_model(), 2);
  Task a = fixed_task();
  Task b = a;
  for (std::size_t i = 0; i < b.y_tgt.size(); ++i) b.y_tgt[i] += 10.0 * (i + 1);
  Tape tape;
  const BoundParams p = bind_constants(tape, params);
  const LatentPaths pa = latent_paths(p, bind_task(tape, a), PosteriorInput::CONTEXT_AND_TARGET);
  const LatentPaths pb = latent_paths(p, bind_task(tape, b), PosteriorInput::CONTEXT_AND_TARGET);
  CHECK(pa.prior.mean.value() == pb.prior.mean.value());
  CHECK(pa.prior.std.value() == pb.prior.std.value());
  CHECK_FALSE(pa.posterior.mean.value() == pb.posterior.mean.value());
}

TEST_CASE("step callback sees every step") {
  std::vector<double> seen;
  const TrainResult r = train(overfit_config(ObjectiveKind::VI, 1.0, 7),
                              [&](std::uint64_t, double loss) { seen.push_back(loss); });
  CHECK(seen == r.losses);
}
